#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ctrait/ast.h"

namespace ctrait {

enum class Tok {
  End,
  Ident,
  Int,
  Str,
  // keywords
  KwTrait, KwClass, KwAbstract, KwReturn, KwIf, KwNew, KwThis, KwTrue,
  KwFalse, KwRename, KwHide, KwIntType, KwBoolType, KwStringType,
  AtRequires, AtEnsures,
  // punctuation
  LParen, RParen, LBrace, RBrace, LBracket, RBracket, Comma, Semi, Colon, Dot,
  Assign, Arrow,
  Plus, Minus, Star, Slash, Percent, StarStar,
  EqEq, NotEq, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang,
};

const char* Describe(Tok kind);

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int col = 1;
  int end_line = 1;
  int end_col = 1;
};

// Throws ParseError on malformed input. Comments are dropped.
std::vector<Token> Lex(std::string_view source, const std::string& file);

}  // namespace ctrait

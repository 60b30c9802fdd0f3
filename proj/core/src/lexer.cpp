#include "lexer.h"

#include <cctype>
#include <map>

#include "ctrait/parser.h"

namespace ctrait {

const char* Describe(Tok kind) {
  switch (kind) {
    case Tok::End: return "end of input";
    case Tok::Ident: return "identifier";
    case Tok::Int: return "integer literal";
    case Tok::Str: return "string literal";
    case Tok::KwTrait: return "'Trait'";
    case Tok::KwClass: return "'class'";
    case Tok::KwAbstract: return "'abstract'";
    case Tok::KwReturn: return "'return'";
    case Tok::KwIf: return "'if'";
    case Tok::KwNew: return "'new'";
    case Tok::KwThis: return "'this'";
    case Tok::KwTrue: return "'true'";
    case Tok::KwFalse: return "'false'";
    case Tok::KwRename: return "'rename'";
    case Tok::KwHide: return "'hide'";
    case Tok::KwIntType: return "'Int'";
    case Tok::KwBoolType: return "'Bool'";
    case Tok::KwStringType: return "'String'";
    case Tok::AtRequires: return "'@requires'";
    case Tok::AtEnsures: return "'@ensures'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Dot: return "'.'";
    case Tok::Assign: return "'='";
    case Tok::Arrow: return "'->'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Percent: return "'%'";
    case Tok::StarStar: return "'**'";
    case Tok::EqEq: return "'=='";
    case Tok::NotEq: return "'!='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::AndAnd: return "'&&'";
    case Tok::OrOr: return "'||'";
    case Tok::Bang: return "'!'";
  }
  return "token";
}

namespace {

const std::map<std::string_view, Tok>& Keywords() {
  static const std::map<std::string_view, Tok> kKeywords = {
      {"Trait", Tok::KwTrait},     {"class", Tok::KwClass},
      {"abstract", Tok::KwAbstract}, {"return", Tok::KwReturn},
      {"if", Tok::KwIf},           {"new", Tok::KwNew},
      {"this", Tok::KwThis},       {"true", Tok::KwTrue},
      {"false", Tok::KwFalse},     {"rename", Tok::KwRename},
      {"hide", Tok::KwHide},       {"Int", Tok::KwIntType},
      {"Bool", Tok::KwBoolType},   {"String", Tok::KwStringType},
  };
  return kKeywords;
}

class Lexer {
 public:
  Lexer(std::string_view src, const std::string& file)
      : src_(src), file_(file) {}

  std::vector<Token> Run() {
    std::vector<Token> out;
    for (;;) {
      SkipTrivia();
      Token tok;
      tok.line = line_;
      tok.col = col_;
      if (pos_ >= src_.size()) {
        tok.kind = Tok::End;
        tok.end_line = line_;
        tok.end_col = col_;
        out.push_back(tok);
        return out;
      }
      size_t start = pos_;
      tok.kind = Scan();
      if (tok.kind != Tok::Str) {
        tok.text = std::string(src_.substr(start, pos_ - start));
      } else {
        tok.text = string_value_;
      }
      tok.end_line = line_;
      tok.end_col = col_ > 1 ? col_ - 1 : 1;
      out.push_back(std::move(tok));
    }
  }

 private:
  [[noreturn]] void Fail(const std::string& message) {
    SourceSpan span{file_, line_, col_, line_, col_};
    throw ParseError(span, message, {});
  }

  char Peek(size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void Advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void SkipTrivia() {
    while (pos_ < src_.size()) {
      char c = Peek();
      if (std::isspace(static_cast<unsigned char>(c))) {
        Advance();
      } else if (c == '/' && Peek(1) == '/') {
        while (pos_ < src_.size() && Peek() != '\n') Advance();
      } else if (c == '/' && Peek(1) == '*') {
        Advance();
        Advance();
        while (pos_ < src_.size() && !(Peek() == '*' && Peek(1) == '/')) {
          Advance();
        }
        if (pos_ >= src_.size()) Fail("unterminated block comment");
        Advance();
        Advance();
      } else {
        return;
      }
    }
  }

  Tok Scan() {
    char c = Peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(Peek())) || Peek() == '_') {
        Advance();
      }
      auto word = src_.substr(start, pos_ - start);
      auto it = Keywords().find(word);
      return it == Keywords().end() ? Tok::Ident : it->second;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (std::isdigit(static_cast<unsigned char>(Peek()))) Advance();
      if (std::isalpha(static_cast<unsigned char>(Peek())) || Peek() == '_') {
        Fail("malformed integer literal");
      }
      return Tok::Int;
    }
    if (c == '"') return ScanString();
    if (c == '@') {
      Advance();
      size_t start = pos_;
      while (std::isalpha(static_cast<unsigned char>(Peek()))) Advance();
      auto word = src_.substr(start, pos_ - start);
      if (word == "requires") return Tok::AtRequires;
      if (word == "ensures") return Tok::AtEnsures;
      Fail("unknown annotation '@" + std::string(word) + "'");
    }
    Advance();
    switch (c) {
      case '(': return Tok::LParen;
      case ')': return Tok::RParen;
      case '{': return Tok::LBrace;
      case '}': return Tok::RBrace;
      case '[': return Tok::LBracket;
      case ']': return Tok::RBracket;
      case ',': return Tok::Comma;
      case ';': return Tok::Semi;
      case ':': return Tok::Colon;
      case '.': return Tok::Dot;
      case '+': return Tok::Plus;
      case '/': return Tok::Slash;
      case '%': return Tok::Percent;
      case '-':
        if (Peek() == '>') { Advance(); return Tok::Arrow; }
        return Tok::Minus;
      case '*':
        if (Peek() == '*') { Advance(); return Tok::StarStar; }
        return Tok::Star;
      case '=':
        if (Peek() == '=') { Advance(); return Tok::EqEq; }
        return Tok::Assign;
      case '!':
        if (Peek() == '=') { Advance(); return Tok::NotEq; }
        return Tok::Bang;
      case '<':
        if (Peek() == '=') { Advance(); return Tok::Le; }
        return Tok::Lt;
      case '>':
        if (Peek() == '=') { Advance(); return Tok::Ge; }
        return Tok::Gt;
      case '&':
        if (Peek() == '&') { Advance(); return Tok::AndAnd; }
        break;
      case '|':
        if (Peek() == '|') { Advance(); return Tok::OrOr; }
        break;
      default:
        break;
    }
    --col_;
    Fail(std::string("unexpected character '") + c + "'");
  }

  Tok ScanString() {
    Advance();
    string_value_.clear();
    for (;;) {
      if (pos_ >= src_.size() || Peek() == '\n') {
        Fail("unterminated string literal");
      }
      char c = Peek();
      Advance();
      if (c == '"') return Tok::Str;
      if (c != '\\') {
        string_value_ += c;
        continue;
      }
      if (pos_ >= src_.size()) Fail("unterminated string literal");
      char esc = Peek();
      Advance();
      switch (esc) {
        case 'n': string_value_ += '\n'; break;
        case 't': string_value_ += '\t'; break;
        case '"': string_value_ += '"'; break;
        case '\\': string_value_ += '\\'; break;
        default: Fail(std::string("unknown escape '\\") + esc + "'");
      }
    }
  }

  std::string_view src_;
  const std::string& file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::string string_value_;
};

}  // namespace

std::vector<Token> Lex(std::string_view source, const std::string& file) {
  return Lexer(source, file).Run();
}

}  // namespace ctrait

// Recursive-descent parser for `.trait` source files.
//
//   program    := decl*
//   decl       := "Trait" IDENT "=" expr ";"?
//               | "class" IDENT ":" expr ";"?
//               | contract* type IDENT "(" params? ")" block ";"?
//   traitLit   := "class" "{" method* "}"
//   method     := contract* "abstract"? type IDENT "(" params? ")" ";"
//               | contract* type IDENT "(" params? ")" block
//   contract   := "@requires" "(" expr ")" | "@ensures" "(" expr ")"
//   stmt       := type IDENT "=" expr ";" | "return" expr ";"
//               | "if" "(" expr ")" stmt
//               | IDENT "=" expr ";"                 (meta functions only)
//   adaptation := "rename" sigRef "->" sigRef ("," sigRef "->" sigRef)*
//               | "hide" sigRef ("," sigRef)*
//
// Precedence, loosest to tightest: `||`, `&&`, comparisons (non-associative),
// `+ -`, `* / %`, `**` (right-associative), unary `-` `!`, postfix
// (`.m(...)`, `[adaptation]`).

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ctrait/ast.h"

namespace ctrait {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourceSpan span, std::string message,
             std::vector<std::string> expected);

  const SourceSpan& span() const { return span_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  SourceSpan span_;
  std::string message_;
  std::vector<std::string> expected_;
};

Program ParseProgram(std::string_view source, std::string file = "<input>");
ExprPtr ParseExpr(std::string_view source, std::string file = "<expr>");

}  // namespace ctrait

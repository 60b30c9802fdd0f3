#pragma once

#include <map>
#include <string>
#include <vector>

#include "ctrait/ast.h"

namespace ctrait {

enum class TypeErrorKind {
  UnknownName,
  TypeMismatch,
  ResultOutsidePost,
  MissingReturn,
  TraitOpInObjectCode,
  AbstractWithBody,
  DuplicateMethod,
  BadContractType,
};

// Stable machine-readable code, e.g. "MissingReturn".
const char* Code(TypeErrorKind kind);

struct TypeError {
  SourceSpan span;
  TypeErrorKind kind;
  std::string message;
};

// `file:line:col: code: message`
std::string Format(const TypeError& error);

// Checks every declaration in order. Composition failures are not type
// errors; they surface during meta-evaluation.
std::vector<TypeError> CheckProgram(const Program& program);

// Checks one trait literal in isolation: sibling calls resolve (mutual
// recursion allowed), every path returns, contracts are Bool-typed, `result`
// only appears in postconditions, and no member mentions Trait.
std::vector<TypeError> CheckTraitLit(const std::vector<MethodDecl>& methods);
std::vector<TypeError> CheckTraitLit(const TraitValue& trait);

// Classes visible to a top-level expression such as `new Pow7().pow(3)`.
using ClassTable = std::map<std::string, const TraitValue*>;

// Checks an expression evaluated outside any declaration (the CLI's `-e`).
// On success `*type` receives its type.
std::vector<TypeError> CheckTopLevelExpr(const Expr& e,
                                         const ClassTable& classes,
                                         TypeName* type = nullptr);

}  // namespace ctrait

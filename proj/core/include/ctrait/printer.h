// Canonical pretty-printing. The output is deterministic: methods sorted by
// name, two-space indentation, one contract annotation per line, single
// spaces around binary operators, and the fewest parentheses that re-parse
// to the same tree.

#pragma once

#include <string>

#include "ctrait/ast.h"

namespace ctrait {

std::string Print(const Expr& e);
std::string Print(const ExprPtr& e);
std::string Print(const Stmt& s, int indent = 0);
std::string Print(const MethodDecl& m, int indent = 0);
std::string Print(const TraitValue& t, int indent = 0);
std::string Print(const Program& p);

std::string PrintSignature(const Signature& sig);
std::string PrintSigRef(const SigRef& ref);
std::string PrintContract(const Contract& c, int indent = 0);
std::string QuoteString(const std::string& s);

}  // namespace ctrait

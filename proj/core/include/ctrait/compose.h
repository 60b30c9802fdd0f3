// Trait composition operators: sum, rename, and hide.
//
// Each operator takes validated traits and returns a validated trait, so a
// composition built only from these operators is correct whenever its inputs
// are: sum only joins a concrete method to an abstract one whose contract is
// identical, rename rewrites every occurrence of a name consistently, and hide
// only makes methods private (inlining them where that is sound) and weakens
// public postconditions.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ctrait/ast.h"

namespace ctrait {

enum class ComposeErrorKind {
  BothConcrete,
  SignatureMismatch,
  ContractMismatch,
  UnknownMethod,
  RenameCollision,
  HiddenAbstractStillCalled,
  // A private method of one operand collides with a name of the other.
  PrivateNameClash,
  // A precondition mentions a hidden method; dropping it would widen the
  // method's domain beyond what was verified.
  RequiresMentionsHidden,
};

const char* Code(ComposeErrorKind kind);

class ComposeError : public std::runtime_error {
 public:
  ComposeError(ComposeErrorKind kind, std::string method, std::string message,
               std::string left_contract = {}, std::string right_contract = {});

  ComposeErrorKind kind() const { return kind_; }
  const std::string& method() const { return method_; }
  // Canonical text of both competing contracts (ContractMismatch only).
  const std::string& left_contract() const { return left_contract_; }
  const std::string& right_contract() const { return right_contract_; }

 private:
  ComposeErrorKind kind_;
  std::string method_;
  std::string left_contract_;
  std::string right_contract_;
};

struct ComposeWarning {
  enum Kind { ContractMentionsHidden, HiddenAbstractDeleted } kind;
  std::string method;
  std::string detail;
};

// Order-insensitive comparison of requires and ensures conjunct multisets,
// each conjunct compared with AlphaStructuralEq under `param_map`.
bool ContractCompatible(const Contract& a, const Contract& b,
                        const ParamMap& param_map);

TraitValue Sum(const TraitValue& lhs, const TraitValue& rhs);

TraitValue Rename(const TraitValue& t,
                  const std::vector<std::pair<SigRef, SigRef>>& mappings);

TraitValue Hide(const TraitValue& t, const std::vector<SigRef>& names,
                std::vector<ComposeWarning>* warnings = nullptr);

// Inlines every call to a private, non-recursive, straight-line method
// (local declarations followed by one return) that sits in an unconditionally
// evaluated position, binding each argument to a fresh local, then deletes
// private methods that are no longer referenced.
TraitValue InlineAndDrop(const TraitValue& t);

// Public signatures with their contracts and abstractness, parameters named
// positionally so that alpha-equivalent shapes compare equal.
struct ShapeEntry {
  std::string text;
  friend bool operator==(const ShapeEntry&, const ShapeEntry&) = default;
  friend auto operator<=>(const ShapeEntry&, const ShapeEntry&) = default;
};
using Shape = std::vector<ShapeEntry>;

Shape StructuralShape(const TraitValue& t);

}  // namespace ctrait

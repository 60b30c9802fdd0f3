// Values and the expression/statement evaluator shared by the runtime, the
// meta-evaluator, and the verifier. The three differ only in how calls, `new`,
// global names, and trait-level expressions are resolved.

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ctrait/ast.h"

namespace ctrait {

// A stateless handle on a materialized class; the calculus has no fields.
struct ObjectRef {
  std::string class_name;
};

using TraitRef = std::shared_ptr<const TraitValue>;

struct Value {
  std::variant<BigInt, bool, std::string, ObjectRef, TraitRef> v;

  Value() : v(BigInt(0)) {}
  Value(BigInt i) : v(std::move(i)) {}
  Value(int i) : v(BigInt(i)) {}
  Value(long long i) : v(BigInt(i)) {}
  Value(bool b) : v(b) {}
  Value(std::string s) : v(std::move(s)) {}
  Value(const char* s) : v(std::string(s)) {}
  Value(ObjectRef o) : v(std::move(o)) {}
  Value(TraitRef t) : v(std::move(t)) {}

  bool IsInt() const { return std::holds_alternative<BigInt>(v); }
  bool IsBool() const { return std::holds_alternative<bool>(v); }
  bool IsString() const { return std::holds_alternative<std::string>(v); }
  bool IsObject() const { return std::holds_alternative<ObjectRef>(v); }
  bool IsTrait() const { return std::holds_alternative<TraitRef>(v); }

  const BigInt& AsInt() const { return std::get<BigInt>(v); }
  bool AsBool() const { return std::get<bool>(v); }
  const std::string& AsString() const { return std::get<std::string>(v); }
  const ObjectRef& AsObject() const { return std::get<ObjectRef>(v); }
  const TraitValue& AsTrait() const { return *std::get<TraitRef>(v); }
};

// Traits compare structurally, objects by class name.
bool operator==(const Value& a, const Value& b);
inline bool operator!=(const Value& a, const Value& b) { return !(a == b); }

// Canonical text: `42`, `true`, `"quoted"`, `new C()`, and for traits
// `Trait{m1, m2}` listing the public methods.
std::string Render(const Value& v);

// The text a String concatenation inserts: like Render, but strings unquoted.
std::string Stringify(const Value& v);

using Bindings = std::vector<std::pair<std::string, Value>>;

std::string Render(const Bindings& bindings);

enum class RuntimeErrorKind {
  DivideByZero,
  NegativeExponent,
  ExponentTooLarge,
  IntegerTooLarge,
  NoSuchMethod,
  AbstractCall,
  MissingReturn,
  DepthLimit,
  Unsupported,
};

const char* Code(RuntimeErrorKind kind);

class RuntimeError : public std::runtime_error {
 public:
  RuntimeError(RuntimeErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}
  RuntimeErrorKind kind() const { return kind_; }

 private:
  RuntimeErrorKind kind_;
};

enum class ContractKind { Requires, Ensures };

const char* Code(ContractKind kind);

class ContractViolation : public std::runtime_error {
 public:
  ContractViolation(std::string method, ContractKind kind, ExprPtr predicate,
                    Bindings bindings);

  const std::string& method() const { return method_; }
  ContractKind kind() const { return kind_; }
  const ExprPtr& predicate() const { return predicate_; }
  // Canonical text of the predicate.
  const std::string& predicate_text() const { return predicate_text_; }
  // Parameters, plus `result` for an ensures violation.
  const Bindings& bindings() const { return bindings_; }

 private:
  std::string method_;
  ContractKind kind_;
  ExprPtr predicate_;
  std::string predicate_text_;
  Bindings bindings_;
};

// Exponents above this bound are rejected rather than computed.
inline constexpr unsigned kMaxExponent = 1u << 16;
// Products and powers wider than this many bits are rejected.
inline constexpr unsigned kMaxIntBits = 1u << 20;

BigInt IntPow(const BigInt& base, const BigInt& exponent);

// Strict left-to-right evaluation of expressions and statement lists.
class Evaluator {
 public:
  using Env = std::map<std::string, Value>;

  virtual ~Evaluator() = default;

  Value Eval(const Expr& e, const Env& env);
  Value Eval(const ExprPtr& e, const Env& env) { return Eval(*e, env); }

  // Runs `body` and returns the value of the Return it reaches. `env` is
  // updated in place by declarations and assignments.
  Value Exec(const Body& body, Env& env, const std::string& where);

  // Evaluates a unary or binary operator on already computed operands.
  static Value Apply(BinaryOp op, const Value& lhs, const Value& rhs);
  static Value Apply(UnaryOp op, const Value& operand);

 protected:
  // `m(...)` or `this.m(...)` in object code; a function call in meta code.
  virtual Value CallUnqualified(const std::string& name,
                                std::vector<Value> args) = 0;
  virtual Value CallOn(const Value& receiver, const std::string& name,
                       std::vector<Value> args);
  virtual Value New(const std::string& class_name);
  // A name not bound in the local environment.
  virtual Value Global(const std::string& name);
  // TraitLit, Sum and Adapt nodes, and `+` on two traits.
  virtual Value TraitExpr(const Expr& e, const Env& env);
  virtual Value TraitSum(const Value& lhs, const Value& rhs);

 private:
  std::optional<Value> ExecStmt(const Stmt& s, Env& env);
};

// Runs `fn` on a thread with a large stack so deep recursion in evaluated
// programs cannot overflow the caller's stack. Exceptions propagate.
void RunWithLargeStack(const std::function<void()>& fn);

}  // namespace ctrait

// Shared AST for the trait language: object-level code, contracts, and the
// meta-level expressions that build traits at compile time.
//
// All nodes are immutable once built and are shared through shared_ptr, so a
// TraitValue can be copied cheaply and handed to several compositions.

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace ctrait {

using BigInt = boost::multiprecision::cpp_int;

struct SourceSpan {
  std::string file;
  int start_line = 0;
  int start_col = 0;
  int end_line = 0;
  int end_col = 0;

  bool IsKnown() const { return start_line > 0; }
};

enum class BaseType { Int, Bool, String, Trait, Class };

struct TypeName {
  BaseType base = BaseType::Int;
  // Only set for BaseType::Class, which is produced by `new C()` and never
  // written in a signature.
  std::string class_name;

  static TypeName Int() { return {BaseType::Int, {}}; }
  static TypeName Bool() { return {BaseType::Bool, {}}; }
  static TypeName String() { return {BaseType::String, {}}; }
  static TypeName Trait() { return {BaseType::Trait, {}}; }
  static TypeName Class(std::string name) {
    return {BaseType::Class, std::move(name)};
  }

  friend bool operator==(const TypeName&, const TypeName&) = default;
};

std::string ToString(const TypeName& type);

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;
struct Stmt;
using StmtPtr = std::shared_ptr<const Stmt>;
using Body = std::vector<StmtPtr>;

enum class BinaryOp {
  Add, Sub, Mul, Div, Mod, Pow,
  Eq, Ne, Lt, Le, Gt, Ge,
  And, Or,
};

enum class UnaryOp { Neg, Not };

const char* Spelling(BinaryOp op);
const char* Spelling(UnaryOp op);

namespace stmt {
struct LocalDecl {
  TypeName type;
  std::string name;
  ExprPtr init;
};
// Only legal inside meta-level function bodies.
struct Assign {
  std::string name;
  ExprPtr value;
};
struct Return {
  ExprPtr value;
};
struct If {
  ExprPtr cond;
  StmtPtr then;
};
}  // namespace stmt

struct Stmt {
  std::variant<stmt::LocalDecl, stmt::Assign, stmt::Return, stmt::If> node;
  SourceSpan span;
};

struct Param {
  std::string name;
  TypeName type;
};

struct Signature {
  std::string name;
  std::vector<Param> params;
  TypeName ret;

  size_t Arity() const { return params.size(); }
};

// `@requires` / `@ensures` conjuncts in source order. Each entry is a boolean
// expression; `result` may only occur in `post`.
struct Contract {
  std::vector<ExprPtr> pre;
  std::vector<ExprPtr> post;

  bool Empty() const { return pre.empty() && post.empty(); }
};

enum class Visibility { Public, Private };

struct MethodDecl {
  Signature sig;
  Contract contract;
  std::optional<Body> body;
  Visibility visibility = Visibility::Public;
  // The `abstract` keyword was written. Only used by the typechecker to flag
  // an abstract method that also has a body.
  bool declared_abstract = false;
  SourceSpan span;

  bool IsAbstract() const { return !body.has_value(); }
  bool IsPublic() const { return visibility == Visibility::Public; }
  const std::string& Name() const { return sig.name; }
  size_t Arity() const { return sig.Arity(); }
};

// A method name plus a parameter-name list, as written in `rename`/`hide`.
struct SigRef {
  std::string name;
  std::vector<std::string> params;
  SourceSpan span;
};

struct RenameAdaptation {
  std::vector<std::pair<SigRef, SigRef>> mappings;
};
struct HideAdaptation {
  std::vector<SigRef> names;
};
using Adaptation = std::variant<RenameAdaptation, HideAdaptation>;

namespace expr {
struct IntLit {
  BigInt value;
};
struct BoolLit {
  bool value;
};
struct StrLit {
  std::string value;
};
struct Var {
  std::string name;
};
struct This {};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
// receiver == nullptr is an unqualified call: a sibling method in object code
// or a meta-level function in meta code.
struct Call {
  ExprPtr receiver;
  std::string name;
  std::vector<ExprPtr> args;
};
struct New {
  std::string class_name;
};
struct TraitLit {
  std::vector<MethodDecl> methods;
};
struct Sum {
  ExprPtr lhs;
  ExprPtr rhs;
};
struct Adapt {
  ExprPtr target;
  Adaptation adaptation;
};
}  // namespace expr

struct Expr {
  std::variant<expr::IntLit, expr::BoolLit, expr::StrLit, expr::Var,
               expr::This, expr::Unary, expr::Binary, expr::Call, expr::New,
               expr::TraitLit, expr::Sum, expr::Adapt>
      node;
  SourceSpan span;

  template <typename T>
  const T* As() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  bool Is() const {
    return std::holds_alternative<T>(node);
  }
};

// A trait is a finite map from method name to declaration. There is no
// overloading, so a name identifies at most one method.
struct TraitValue {
  std::map<std::string, MethodDecl> methods;

  const MethodDecl* Find(const std::string& name) const {
    auto it = methods.find(name);
    return it == methods.end() ? nullptr : &it->second;
  }
  bool Has(const std::string& name) const { return methods.count(name) != 0; }
};

struct TraitDecl {
  std::string name;
  ExprPtr init;
  SourceSpan span;
};
struct ClassDecl {
  std::string name;
  ExprPtr init;
  SourceSpan span;
};
struct FunDecl {
  Contract contract;
  Signature sig;
  Body body;
  SourceSpan span;
};
using Decl = std::variant<TraitDecl, ClassDecl, FunDecl>;

const std::string& DeclName(const Decl& decl);
const SourceSpan& DeclSpan(const Decl& decl);

struct Program {
  std::vector<Decl> decls;
};

// ---------------------------------------------------------------------------
// Construction helpers.

ExprPtr MakeInt(BigInt value, SourceSpan span = {});
ExprPtr MakeBool(bool value, SourceSpan span = {});
ExprPtr MakeStr(std::string value, SourceSpan span = {});
ExprPtr MakeVar(std::string name, SourceSpan span = {});
ExprPtr MakeThis(SourceSpan span = {});
ExprPtr MakeUnary(UnaryOp op, ExprPtr operand, SourceSpan span = {});
ExprPtr MakeBinary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr MakeCall(ExprPtr receiver, std::string name, std::vector<ExprPtr> args,
                 SourceSpan span = {});
ExprPtr MakeNew(std::string class_name, SourceSpan span = {});
ExprPtr MakeTraitLit(std::vector<MethodDecl> methods, SourceSpan span = {});
ExprPtr MakeSum(ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr MakeAdapt(ExprPtr target, Adaptation adaptation, SourceSpan span = {});

StmtPtr MakeLocal(TypeName type, std::string name, ExprPtr init,
                  SourceSpan span = {});
StmtPtr MakeAssign(std::string name, ExprPtr value, SourceSpan span = {});
StmtPtr MakeReturn(ExprPtr value, SourceSpan span = {});
StmtPtr MakeIf(ExprPtr cond, StmtPtr then, SourceSpan span = {});

// Builds a TraitValue from a literal's method list. Duplicate names keep the
// first declaration; the typechecker reports them.
TraitValue ToTraitValue(const std::vector<MethodDecl>& methods);

// ---------------------------------------------------------------------------
// Structural equality. Spans and the `declared_abstract` marker are ignored;
// integer literals compare by value.

bool StructurallyEqual(const Expr& a, const Expr& b);
bool StructurallyEqual(const ExprPtr& a, const ExprPtr& b);
bool StructurallyEqual(const Stmt& a, const Stmt& b);
bool StructurallyEqual(const Body& a, const Body& b);
bool StructurallyEqual(const MethodDecl& a, const MethodDecl& b);
bool StructurallyEqual(const TraitValue& a, const TraitValue& b);
bool StructurallyEqual(const Program& a, const Program& b);

inline bool operator==(const TraitValue& a, const TraitValue& b) {
  return StructurallyEqual(a, b);
}

// Maps parameter names of one method onto another's, positionally.
using ParamMap = std::map<std::string, std::string>;

ParamMap PositionalParamMap(const Signature& from, const Signature& to);

// True iff `a` and `b` are identical once every variable of `a` found in
// `param_map` is replaced by its image. The map must be a bijection between
// the two methods' parameters; `result` and non-parameter names compare
// verbatim.
bool AlphaStructuralEq(const Expr& a, const Expr& b, const ParamMap& param_map);

// ---------------------------------------------------------------------------
// Traversal and rewriting.

// Calls `fn` on every node of `e` in pre-order. Descends into nested trait
// literals only when `into_trait_lits` is set.
void Visit(const Expr& e, const std::function<void(const Expr&)>& fn,
           bool into_trait_lits = false);
void Visit(const Stmt& s, const std::function<void(const Expr&)>& fn,
           bool into_trait_lits = false);

// Rebuilds `e` bottom-up. `fn` receives a node whose children are already
// rewritten and returns a replacement, or nullptr to keep it.
ExprPtr Rewrite(const ExprPtr& e,
                const std::function<ExprPtr(const ExprPtr&)>& fn);
StmtPtr Rewrite(const StmtPtr& s,
                const std::function<ExprPtr(const ExprPtr&)>& fn);
Body Rewrite(const Body& body,
             const std::function<ExprPtr(const ExprPtr&)>& fn);

// True for `m(...)` and `this.m(...)`.
bool IsSiblingCall(const expr::Call& call);

// Names of sibling methods invoked anywhere in `e`.
std::set<std::string> CalledMethods(const Expr& e);
std::set<std::string> CalledMethods(const Body& body);
std::set<std::string> CalledMethods(const MethodDecl& m, bool include_contract);

bool MentionsVar(const Expr& e, const std::string& name);

// Renames sibling calls according to `renames` (applied simultaneously).
ExprPtr RenameCalls(const ExprPtr& e,
                    const std::map<std::string, std::string>& renames);
MethodDecl RenameCalls(const MethodDecl& m,
                       const std::map<std::string, std::string>& renames);

// Renames free variable occurrences (no binders exist inside expressions).
ExprPtr RenameVars(const ExprPtr& e,
                   const std::map<std::string, std::string>& renames);

// Number of Binary nodes with operator `op` in `e` / in a body.
int CountBinary(const Expr& e, BinaryOp op);
int CountBinary(const Body& body, BinaryOp op);

// Checks the TraitValue invariants that every composition operator must
// preserve: keys match method names, abstract methods are public, parameter
// names are distinct and not reserved, and every sibling call in a body or
// contract resolves to a method of matching arity. Returns a description of
// the first violation.
std::optional<std::string> Validate(const TraitValue& t);

}  // namespace ctrait

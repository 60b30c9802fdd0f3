#include "ctrait/typecheck.h"

#include <optional>
#include <set>

#include "ctrait/printer.h"

namespace ctrait {

const char* Code(TypeErrorKind kind) {
  switch (kind) {
    case TypeErrorKind::UnknownName: return "UnknownName";
    case TypeErrorKind::TypeMismatch: return "TypeMismatch";
    case TypeErrorKind::ResultOutsidePost: return "ResultOutsidePost";
    case TypeErrorKind::MissingReturn: return "MissingReturn";
    case TypeErrorKind::TraitOpInObjectCode: return "TraitOpInObjectCode";
    case TypeErrorKind::AbstractWithBody: return "AbstractWithBody";
    case TypeErrorKind::DuplicateMethod: return "DuplicateMethod";
    case TypeErrorKind::BadContractType: return "BadContractType";
  }
  return "Unknown";
}

std::string Format(const TypeError& error) {
  return error.span.file + ":" + std::to_string(error.span.start_line) + ":" +
         std::to_string(error.span.start_col) + ": " + Code(error.kind) +
         ": " + error.message;
}

namespace {

// Checker-internal type: TypeName plus the receiver-only `this` and an error
// marker that suppresses cascades.
struct Ty {
  enum Kind { Int, Bool, String, Trait, Class, This, Error } kind = Error;
  std::string class_name;

  static Ty Of(const TypeName& t) {
    switch (t.base) {
      case BaseType::Int: return {Int, {}};
      case BaseType::Bool: return {Bool, {}};
      case BaseType::String: return {String, {}};
      case BaseType::Trait: return {Trait, {}};
      case BaseType::Class: return {Class, t.class_name};
    }
    return {};
  }
  bool ok() const { return kind != Error; }
  bool operator==(const Ty& o) const {
    return kind == o.kind && class_name == o.class_name;
  }
  std::string str() const {
    switch (kind) {
      case Int: return "Int";
      case Bool: return "Bool";
      case String: return "String";
      case Trait: return "Trait";
      case Class: return class_name;
      case This: return "this";
      case Error: return "<error>";
    }
    return "?";
  }
};

enum class Level { Object, Meta, TopLevel };

struct FunSig {
  Signature sig;
};

class Checker {
 public:
  std::vector<TypeError> errors;

  void CheckProgram(const Program& p) {
    std::set<std::string> names;
    for (const Decl& d : p.decls) {
      const std::string& name = DeclName(d);
      if (!names.insert(name).second) {
        Report(DeclSpan(d), TypeErrorKind::DuplicateMethod,
               "duplicate declaration '" + name + "'");
      }
      if (const auto* t = std::get_if<TraitDecl>(&d)) {
        Ctx ctx = MetaCtx();
        Ty ty = CheckExpr(*t->init, ctx);
        if (ty.ok() && ty.kind != Ty::Trait) {
          Report(t->init->span, TypeErrorKind::TypeMismatch,
                 "initializer of trait '" + t->name + "' has type " +
                     ty.str() + ", expected Trait");
        }
        trait_globals_.insert(t->name);
      } else if (const auto* c = std::get_if<ClassDecl>(&d)) {
        Ctx ctx = MetaCtx();
        Ty ty = CheckExpr(*c->init, ctx);
        if (ty.ok() && ty.kind != Ty::Trait) {
          Report(c->init->span, TypeErrorKind::TypeMismatch,
                 "initializer of class '" + c->name + "' has type " +
                     ty.str() + ", expected Trait");
        }
      } else {
        CheckFunction(std::get<FunDecl>(d));
      }
    }
  }

  void CheckTraitLit(const std::vector<MethodDecl>& methods,
                     const SourceSpan& span) {
    TraitValue t;
    for (const auto& m : methods) {
      if (!t.methods.emplace(m.Name(), m).second) {
        Report(m.span.IsKnown() ? m.span : span, TypeErrorKind::DuplicateMethod,
               "method '" + m.Name() + "' is declared more than once");
      }
    }
    for (const auto& m : methods) CheckMethod(m, t);
  }

  Ty CheckTopLevel(const Expr& e, const ClassTable& classes) {
    Ctx ctx;
    ctx.level = Level::TopLevel;
    ctx.classes = &classes;
    return CheckExpr(e, ctx);
  }

 private:
  struct Ctx {
    Level level = Level::Meta;
    std::map<std::string, TypeName> scope;
    const TraitValue* trait = nullptr;  // siblings, object level only
    std::optional<TypeName> result;     // set inside postconditions
    const ClassTable* classes = nullptr;
    const FunDecl* current_fun = nullptr;
    bool in_predicate = false;
  };

  Ctx MetaCtx() const {
    Ctx ctx;
    ctx.level = Level::Meta;
    return ctx;
  }

  void Report(const SourceSpan& span, TypeErrorKind kind, std::string msg) {
    errors.push_back({span, kind, std::move(msg)});
  }

  bool CheckParams(const Signature& sig, const SourceSpan& span,
                   bool object_level) {
    std::set<std::string> seen;
    bool ok = true;
    for (const auto& p : sig.params) {
      if (p.name == "this" || p.name == "result") {
        Report(span, TypeErrorKind::TypeMismatch,
               "parameter name '" + p.name + "' is reserved");
        ok = false;
      }
      if (!seen.insert(p.name).second) {
        Report(span, TypeErrorKind::TypeMismatch,
               "parameter '" + p.name + "' of '" + sig.name +
                   "' is declared twice");
        ok = false;
      }
      if (object_level && p.type.base == BaseType::Trait) {
        Report(span, TypeErrorKind::TraitOpInObjectCode,
               "trait method '" + sig.name + "' has a Trait-typed parameter");
        ok = false;
      }
    }
    if (object_level && sig.ret.base == BaseType::Trait) {
      Report(span, TypeErrorKind::TraitOpInObjectCode,
             "trait method '" + sig.name + "' returns Trait");
      ok = false;
    }
    return ok;
  }

  void CheckContract(const Contract& contract, const Signature& sig, Ctx& ctx) {
    for (const auto& p : contract.pre) {
      ctx.result.reset();
      ctx.in_predicate = true;
      Ty ty = CheckExpr(*p, ctx);
      if (ty.ok() && ty.kind != Ty::Bool) {
        Report(p->span, TypeErrorKind::BadContractType,
               "@requires predicate has type " + ty.str() + ", expected Bool");
      }
    }
    for (const auto& p : contract.post) {
      ctx.result = sig.ret;
      ctx.in_predicate = true;
      Ty ty = CheckExpr(*p, ctx);
      if (ty.ok() && ty.kind != Ty::Bool) {
        Report(p->span, TypeErrorKind::BadContractType,
               "@ensures predicate has type " + ty.str() + ", expected Bool");
      }
    }
    ctx.result.reset();
    ctx.in_predicate = false;
  }

  void CheckMethod(const MethodDecl& m, const TraitValue& siblings) {
    CheckParams(m.sig, m.span, /*object_level=*/true);
    if (m.declared_abstract && m.body) {
      Report(m.span, TypeErrorKind::AbstractWithBody,
             "abstract method '" + m.Name() + "' has a body");
    }
    Ctx ctx;
    ctx.level = Level::Object;
    ctx.trait = &siblings;
    for (const auto& p : m.sig.params) ctx.scope[p.name] = p.type;
    CheckContract(m.contract, m.sig, ctx);
    if (m.body) CheckBody(*m.body, m.sig, m.span, ctx);
  }

  void CheckFunction(const FunDecl& f) {
    CheckParams(f.sig, f.span, /*object_level=*/false);
    functions_[f.sig.name] = f.sig;
    Ctx ctx = MetaCtx();
    ctx.current_fun = &f;
    for (const auto& p : f.sig.params) ctx.scope[p.name] = p.type;
    CheckContract(f.contract, f.sig, ctx);
    CheckBody(f.body, f.sig, f.span, ctx);
  }

  void CheckBody(const Body& body, const Signature& sig,
                 const SourceSpan& span, Ctx ctx) {
    bool returns = false;
    for (const auto& s : body) returns |= CheckStmt(*s, sig, ctx);
    if (!returns) {
      Report(span, TypeErrorKind::MissingReturn,
             "'" + sig.name + "' may finish without returning a value");
    }
  }

  // Returns true when the statement always returns.
  bool CheckStmt(const Stmt& s, const Signature& sig, Ctx& ctx) {
    return std::visit(
        [&](const auto& x) -> bool {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, stmt::LocalDecl>) {
            Ty ty = CheckExpr(*x.init, ctx);
            if (x.name == "this" || x.name == "result") {
              Report(s.span, TypeErrorKind::TypeMismatch,
                     "local name '" + x.name + "' is reserved");
            } else if (ctx.scope.count(x.name)) {
              Report(s.span, TypeErrorKind::TypeMismatch,
                     "'" + x.name + "' is already declared");
            }
            if (ctx.level == Level::Object &&
                x.type.base == BaseType::Trait) {
              Report(s.span, TypeErrorKind::TraitOpInObjectCode,
                     "Trait-typed local in a trait method");
            }
            if (ty.ok() && !(ty == Ty::Of(x.type))) {
              Report(x.init->span, TypeErrorKind::TypeMismatch,
                     "cannot initialize " + ToString(x.type) + " '" + x.name +
                         "' with a value of type " + ty.str());
            }
            ctx.scope[x.name] = x.type;
            return false;
          } else if constexpr (std::is_same_v<T, stmt::Assign>) {
            Ty ty = CheckExpr(*x.value, ctx);
            auto it = ctx.scope.find(x.name);
            if (it == ctx.scope.end()) {
              Report(s.span, TypeErrorKind::UnknownName,
                     "assignment to undeclared '" + x.name + "'");
            } else if (ty.ok() && !(ty == Ty::Of(it->second))) {
              Report(x.value->span, TypeErrorKind::TypeMismatch,
                     "cannot assign " + ty.str() + " to '" + x.name +
                         "' of type " + ToString(it->second));
            }
            return false;
          } else if constexpr (std::is_same_v<T, stmt::Return>) {
            Ty ty = CheckExpr(*x.value, ctx);
            if (ty.ok() && !(ty == Ty::Of(sig.ret))) {
              Report(x.value->span, TypeErrorKind::TypeMismatch,
                     "'" + sig.name + "' returns " + ToString(sig.ret) +
                         " but this returns " + ty.str());
            }
            return true;
          } else {
            Ty cond = CheckExpr(*x.cond, ctx);
            if (cond.ok() && cond.kind != Ty::Bool) {
              Report(x.cond->span, TypeErrorKind::TypeMismatch,
                     "if condition has type " + cond.str() + ", expected Bool");
            }
            Ctx inner = ctx;
            CheckStmt(*x.then, sig, inner);
            return false;
          }
        },
        s.node);
  }

  Ty Expect(const Expr& e, Ctx& ctx, Ty::Kind want, const char* what) {
    Ty ty = CheckExpr(e, ctx);
    if (ty.ok() && ty.kind != want) {
      Report(e.span, TypeErrorKind::TypeMismatch,
             std::string(what) + " expects " + Ty{want, {}}.str() +
                 ", found " + ty.str());
      return {};
    }
    return ty;
  }

  bool TraitOpsAllowed(const Expr& e, const Ctx& ctx, const char* what) {
    if (ctx.level == Level::Meta) return true;
    Report(e.span, TypeErrorKind::TraitOpInObjectCode,
           std::string(what) + " is only allowed in meta-level code");
    return false;
  }

  Ty CheckArgs(const expr::Call& call, const Signature& callee,
               const SourceSpan& span, Ctx& ctx) {
    if (call.args.size() != callee.Arity()) {
      Report(span, TypeErrorKind::TypeMismatch,
             "'" + callee.name + "' takes " + std::to_string(callee.Arity()) +
                 " argument(s), " + std::to_string(call.args.size()) +
                 " given");
      for (const auto& a : call.args) CheckExpr(*a, ctx);
      return Ty::Of(callee.ret);
    }
    for (size_t i = 0; i < call.args.size(); ++i) {
      Ty ty = CheckExpr(*call.args[i], ctx);
      if (ty.ok() && !(ty == Ty::Of(callee.params[i].type))) {
        Report(call.args[i]->span, TypeErrorKind::TypeMismatch,
               "argument " + std::to_string(i + 1) + " of '" + callee.name +
                   "' expects " + ToString(callee.params[i].type) +
                   ", found " + ty.str());
      }
    }
    return Ty::Of(callee.ret);
  }

  Ty CheckCall(const Expr& e, const expr::Call& call, Ctx& ctx) {
    if (call.receiver == nullptr || call.receiver->Is<expr::This>()) {
      if (call.receiver) CheckExpr(*call.receiver, ctx);
      if (ctx.level == Level::Object) {
        const MethodDecl* m = ctx.trait->Find(call.name);
        if (m == nullptr) {
          Report(e.span, TypeErrorKind::UnknownName,
                 "no method '" + call.name + "' in this trait");
          for (const auto& a : call.args) CheckExpr(*a, ctx);
          return {};
        }
        return CheckArgs(call, m->sig, e.span, ctx);
      }
      if (ctx.level == Level::Meta && call.receiver == nullptr) {
        auto it = functions_.find(call.name);
        if (it == functions_.end()) {
          Report(e.span, TypeErrorKind::UnknownName,
                 "no function '" + call.name + "' declared before this use");
          for (const auto& a : call.args) CheckExpr(*a, ctx);
          return {};
        }
        return CheckArgs(call, it->second, e.span, ctx);
      }
      Report(e.span, TypeErrorKind::UnknownName,
             "unknown function '" + call.name + "'");
      return {};
    }
    Ty recv = CheckExpr(*call.receiver, ctx);
    if (!recv.ok()) {
      for (const auto& a : call.args) CheckExpr(*a, ctx);
      return {};
    }
    if (recv.kind != Ty::Class || ctx.classes == nullptr) {
      Report(call.receiver->span, TypeErrorKind::TypeMismatch,
             "cannot call a method on a value of type " + recv.str());
      return {};
    }
    auto it = ctx.classes->find(recv.class_name);
    const MethodDecl* m = it->second->Find(call.name);
    if (m == nullptr || !m->IsPublic()) {
      Report(e.span, TypeErrorKind::UnknownName,
             "class '" + recv.class_name + "' has no public method '" +
                 call.name + "'");
      return {};
    }
    return CheckArgs(call, m->sig, e.span, ctx);
  }

  Ty CheckExpr(const Expr& e, Ctx& ctx) {
    return std::visit(
        [&](const auto& x) -> Ty {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, expr::IntLit>) {
            return {Ty::Int, {}};
          } else if constexpr (std::is_same_v<T, expr::BoolLit>) {
            return {Ty::Bool, {}};
          } else if constexpr (std::is_same_v<T, expr::StrLit>) {
            return {Ty::String, {}};
          } else if constexpr (std::is_same_v<T, expr::Var>) {
            if (x.name == "result") {
              if (ctx.result) return Ty::Of(*ctx.result);
              Report(e.span, TypeErrorKind::ResultOutsidePost,
                     "'result' may only appear in @ensures");
              return {};
            }
            if (auto it = ctx.scope.find(x.name); it != ctx.scope.end()) {
              return Ty::Of(it->second);
            }
            if (ctx.level == Level::Meta && trait_globals_.count(x.name)) {
              return {Ty::Trait, {}};
            }
            Report(e.span, TypeErrorKind::UnknownName,
                   "unknown name '" + x.name + "'");
            return {};
          } else if constexpr (std::is_same_v<T, expr::This>) {
            if (ctx.level == Level::Object) return {Ty::This, {}};
            Report(e.span, TypeErrorKind::UnknownName,
                   "'this' is only available inside trait methods");
            return {};
          } else if constexpr (std::is_same_v<T, expr::Unary>) {
            if (x.op == UnaryOp::Neg) return Expect(*x.operand, ctx, Ty::Int, "'-'");
            return Expect(*x.operand, ctx, Ty::Bool, "'!'");
          } else if constexpr (std::is_same_v<T, expr::Binary>) {
            return CheckBinary(e, x, ctx);
          } else if constexpr (std::is_same_v<T, expr::Call>) {
            return CheckCall(e, x, ctx);
          } else if constexpr (std::is_same_v<T, expr::New>) {
            if (ctx.level != Level::TopLevel) {
              Report(e.span, TypeErrorKind::TypeMismatch,
                     "'new' is only allowed in top-level expressions");
              return {};
            }
            if (!ctx.classes || !ctx.classes->count(x.class_name)) {
              Report(e.span, TypeErrorKind::UnknownName,
                     "unknown class '" + x.class_name + "'");
              return {};
            }
            return {Ty::Class, x.class_name};
          } else if constexpr (std::is_same_v<T, expr::TraitLit>) {
            if (!TraitOpsAllowed(e, ctx, "a trait literal")) return {};
            CheckTraitLit(x.methods, e.span);
            return {Ty::Trait, {}};
          } else if constexpr (std::is_same_v<T, expr::Sum>) {
            if (!TraitOpsAllowed(e, ctx, "trait '+'")) return {};
            Expect(*x.lhs, ctx, Ty::Trait, "trait '+'");
            Expect(*x.rhs, ctx, Ty::Trait, "trait '+'");
            return {Ty::Trait, {}};
          } else {
            static_assert(std::is_same_v<T, expr::Adapt>);
            if (!TraitOpsAllowed(e, ctx, "an adaptation")) return {};
            Expect(*x.target, ctx, Ty::Trait, "an adaptation");
            return {Ty::Trait, {}};
          }
        },
        e.node);
  }

  Ty CheckBinary(const Expr& e, const expr::Binary& b, Ctx& ctx) {
    Ty lhs = CheckExpr(*b.lhs, ctx);
    Ty rhs = CheckExpr(*b.rhs, ctx);
    if (!lhs.ok() || !rhs.ok()) return {};
    auto mismatch = [&]() -> Ty {
      Report(e.span, TypeErrorKind::TypeMismatch,
             std::string("operator '") + Spelling(b.op) +
                 "' cannot combine " + lhs.str() + " and " + rhs.str());
      return {};
    };
    switch (b.op) {
      case BinaryOp::Add:
        if (lhs.kind == Ty::Int && rhs.kind == Ty::Int) return lhs;
        if ((lhs.kind == Ty::String &&
             (rhs.kind == Ty::String || rhs.kind == Ty::Int)) ||
            (lhs.kind == Ty::Int && rhs.kind == Ty::String)) {
          return {Ty::String, {}};
        }
        if (lhs.kind == Ty::Trait && rhs.kind == Ty::Trait) {
          if (!TraitOpsAllowed(e, ctx, "trait '+'")) return {};
          return lhs;
        }
        return mismatch();
      case BinaryOp::Sub: case BinaryOp::Mul: case BinaryOp::Div:
      case BinaryOp::Mod: case BinaryOp::Pow:
        if (lhs.kind == Ty::Int && rhs.kind == Ty::Int) return lhs;
        return mismatch();
      case BinaryOp::Lt: case BinaryOp::Le: case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (lhs.kind == Ty::Int && rhs.kind == Ty::Int) return {Ty::Bool, {}};
        return mismatch();
      case BinaryOp::Eq: case BinaryOp::Ne:
        if (lhs == rhs && lhs.kind != Ty::This && lhs.kind != Ty::Class) {
          return {Ty::Bool, {}};
        }
        return mismatch();
      case BinaryOp::And: case BinaryOp::Or:
        if (lhs.kind == Ty::Bool && rhs.kind == Ty::Bool) return lhs;
        return mismatch();
    }
    return {};
  }

  std::set<std::string> trait_globals_;
  std::map<std::string, Signature> functions_;
};

}  // namespace

std::vector<TypeError> CheckProgram(const Program& program) {
  Checker c;
  c.CheckProgram(program);
  return std::move(c.errors);
}

std::vector<TypeError> CheckTraitLit(const std::vector<MethodDecl>& methods) {
  Checker c;
  c.CheckTraitLit(methods, {});
  return std::move(c.errors);
}

std::vector<TypeError> CheckTraitLit(const TraitValue& trait) {
  std::vector<MethodDecl> methods;
  for (const auto& [name, m] : trait.methods) methods.push_back(m);
  return CheckTraitLit(methods);
}

std::vector<TypeError> CheckTopLevelExpr(const Expr& e,
                                         const ClassTable& classes,
                                         TypeName* type) {
  Checker c;
  Ty ty = c.CheckTopLevel(e, classes);
  if (type && ty.ok()) {
    switch (ty.kind) {
      case Ty::Int: *type = TypeName::Int(); break;
      case Ty::Bool: *type = TypeName::Bool(); break;
      case Ty::String: *type = TypeName::String(); break;
      case Ty::Trait: *type = TypeName::Trait(); break;
      case Ty::Class: *type = TypeName::Class(ty.class_name); break;
      default: break;
    }
  }
  return std::move(c.errors);
}

}  // namespace ctrait

#include "ctrait/ast.h"

#include <algorithm>

namespace ctrait {

std::string ToString(const TypeName& type) {
  switch (type.base) {
    case BaseType::Int: return "Int";
    case BaseType::Bool: return "Bool";
    case BaseType::String: return "String";
    case BaseType::Trait: return "Trait";
    case BaseType::Class: return type.class_name;
  }
  return "?";
}

const char* Spelling(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Pow: return "**";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
  }
  return "?";
}

const char* Spelling(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "!"; }

const std::string& DeclName(const Decl& decl) {
  return std::visit([](const auto& d) -> const std::string& {
    if constexpr (std::is_same_v<std::decay_t<decltype(d)>, FunDecl>) {
      return d.sig.name;
    } else {
      return d.name;
    }
  }, decl);
}

const SourceSpan& DeclSpan(const Decl& decl) {
  return std::visit([](const auto& d) -> const SourceSpan& { return d.span; },
                    decl);
}

namespace {

template <typename T>
ExprPtr Make(T node, SourceSpan span) {
  return std::make_shared<const Expr>(Expr{std::move(node), std::move(span)});
}

template <typename T>
StmtPtr MakeS(T node, SourceSpan span) {
  return std::make_shared<const Stmt>(Stmt{std::move(node), std::move(span)});
}

}  // namespace

ExprPtr MakeInt(BigInt value, SourceSpan span) {
  return Make(expr::IntLit{std::move(value)}, std::move(span));
}
ExprPtr MakeBool(bool value, SourceSpan span) {
  return Make(expr::BoolLit{value}, std::move(span));
}
ExprPtr MakeStr(std::string value, SourceSpan span) {
  return Make(expr::StrLit{std::move(value)}, std::move(span));
}
ExprPtr MakeVar(std::string name, SourceSpan span) {
  return Make(expr::Var{std::move(name)}, std::move(span));
}
ExprPtr MakeThis(SourceSpan span) { return Make(expr::This{}, std::move(span)); }
ExprPtr MakeUnary(UnaryOp op, ExprPtr operand, SourceSpan span) {
  return Make(expr::Unary{op, std::move(operand)}, std::move(span));
}
ExprPtr MakeBinary(BinaryOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  return Make(expr::Binary{op, std::move(lhs), std::move(rhs)},
              std::move(span));
}
ExprPtr MakeCall(ExprPtr receiver, std::string name, std::vector<ExprPtr> args,
                 SourceSpan span) {
  return Make(expr::Call{std::move(receiver), std::move(name), std::move(args)},
              std::move(span));
}
ExprPtr MakeNew(std::string class_name, SourceSpan span) {
  return Make(expr::New{std::move(class_name)}, std::move(span));
}
ExprPtr MakeTraitLit(std::vector<MethodDecl> methods, SourceSpan span) {
  return Make(expr::TraitLit{std::move(methods)}, std::move(span));
}
ExprPtr MakeSum(ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  return Make(expr::Sum{std::move(lhs), std::move(rhs)}, std::move(span));
}
ExprPtr MakeAdapt(ExprPtr target, Adaptation adaptation, SourceSpan span) {
  return Make(expr::Adapt{std::move(target), std::move(adaptation)},
              std::move(span));
}

StmtPtr MakeLocal(TypeName type, std::string name, ExprPtr init,
                  SourceSpan span) {
  return MakeS(stmt::LocalDecl{std::move(type), std::move(name),
                               std::move(init)},
               std::move(span));
}
StmtPtr MakeAssign(std::string name, ExprPtr value, SourceSpan span) {
  return MakeS(stmt::Assign{std::move(name), std::move(value)},
               std::move(span));
}
StmtPtr MakeReturn(ExprPtr value, SourceSpan span) {
  return MakeS(stmt::Return{std::move(value)}, std::move(span));
}
StmtPtr MakeIf(ExprPtr cond, StmtPtr then, SourceSpan span) {
  return MakeS(stmt::If{std::move(cond), std::move(then)}, std::move(span));
}

TraitValue ToTraitValue(const std::vector<MethodDecl>& methods) {
  TraitValue t;
  for (const auto& m : methods) t.methods.emplace(m.Name(), m);
  return t;
}

// ---------------------------------------------------------------------------
// Equality

namespace {

bool EqualSigRef(const SigRef& a, const SigRef& b) {
  return a.name == b.name && a.params == b.params;
}

bool EqualAdaptation(const Adaptation& a, const Adaptation& b) {
  if (a.index() != b.index()) return false;
  if (const auto* ra = std::get_if<RenameAdaptation>(&a)) {
    const auto& rb = std::get<RenameAdaptation>(b);
    if (ra->mappings.size() != rb.mappings.size()) return false;
    for (size_t i = 0; i < ra->mappings.size(); ++i) {
      if (!EqualSigRef(ra->mappings[i].first, rb.mappings[i].first) ||
          !EqualSigRef(ra->mappings[i].second, rb.mappings[i].second)) {
        return false;
      }
    }
    return true;
  }
  const auto& ha = std::get<HideAdaptation>(a);
  const auto& hb = std::get<HideAdaptation>(b);
  if (ha.names.size() != hb.names.size()) return false;
  for (size_t i = 0; i < ha.names.size(); ++i) {
    if (!EqualSigRef(ha.names[i], hb.names[i])) return false;
  }
  return true;
}

bool EqualSignature(const Signature& a, const Signature& b) {
  if (a.name != b.name || !(a.ret == b.ret) || a.Arity() != b.Arity()) {
    return false;
  }
  for (size_t i = 0; i < a.Arity(); ++i) {
    if (a.params[i].name != b.params[i].name ||
        !(a.params[i].type == b.params[i].type)) {
      return false;
    }
  }
  return true;
}

bool EqualExprList(const std::vector<ExprPtr>& a,
                   const std::vector<ExprPtr>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!StructurallyEqual(a[i], b[i])) return false;
  }
  return true;
}

bool EqualContract(const Contract& a, const Contract& b) {
  return EqualExprList(a.pre, b.pre) && EqualExprList(a.post, b.post);
}

// Trait literals compare as name-keyed sets, matching the canonical printer
// which sorts methods by name.
bool EqualMethodLists(const std::vector<MethodDecl>& a,
                      const std::vector<MethodDecl>& b) {
  if (a.size() != b.size()) return false;
  auto sorted = [](const std::vector<MethodDecl>& v) {
    std::vector<const MethodDecl*> out;
    for (const auto& m : v) out.push_back(&m);
    std::stable_sort(out.begin(), out.end(),
                     [](auto* x, auto* y) { return x->Name() < y->Name(); });
    return out;
  };
  auto sa = sorted(a);
  auto sb = sorted(b);
  for (size_t i = 0; i < sa.size(); ++i) {
    if (!StructurallyEqual(*sa[i], *sb[i])) return false;
  }
  return true;
}

struct AlphaCtx {
  const ParamMap* forward;
  std::set<std::string> image;
};

bool AlphaEq(const Expr& a, const Expr& b, const AlphaCtx* alpha) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, expr::IntLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, expr::BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, expr::StrLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, expr::Var>) {
          if (alpha == nullptr) return x.name == y.name;
          auto it = alpha->forward->find(x.name);
          if (it != alpha->forward->end()) return it->second == y.name;
          return x.name == y.name && alpha->image.count(y.name) == 0;
        } else if constexpr (std::is_same_v<T, expr::This>) {
          return true;
        } else if constexpr (std::is_same_v<T, expr::Unary>) {
          return x.op == y.op && AlphaEq(*x.operand, *y.operand, alpha);
        } else if constexpr (std::is_same_v<T, expr::Binary>) {
          return x.op == y.op && AlphaEq(*x.lhs, *y.lhs, alpha) &&
                 AlphaEq(*x.rhs, *y.rhs, alpha);
        } else if constexpr (std::is_same_v<T, expr::Call>) {
          if (x.name != y.name || x.args.size() != y.args.size()) return false;
          if ((x.receiver == nullptr) != (y.receiver == nullptr)) return false;
          if (x.receiver && !AlphaEq(*x.receiver, *y.receiver, alpha)) {
            return false;
          }
          for (size_t i = 0; i < x.args.size(); ++i) {
            if (!AlphaEq(*x.args[i], *y.args[i], alpha)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, expr::New>) {
          return x.class_name == y.class_name;
        } else if constexpr (std::is_same_v<T, expr::TraitLit>) {
          return EqualMethodLists(x.methods, y.methods);
        } else if constexpr (std::is_same_v<T, expr::Sum>) {
          return AlphaEq(*x.lhs, *y.lhs, alpha) &&
                 AlphaEq(*x.rhs, *y.rhs, alpha);
        } else {
          static_assert(std::is_same_v<T, expr::Adapt>);
          return AlphaEq(*x.target, *y.target, alpha) &&
                 EqualAdaptation(x.adaptation, y.adaptation);
        }
      },
      a.node);
}

}  // namespace

bool StructurallyEqual(const Expr& a, const Expr& b) {
  return AlphaEq(a, b, nullptr);
}

bool StructurallyEqual(const ExprPtr& a, const ExprPtr& b) {
  if (a == nullptr || b == nullptr) return a == b;
  return StructurallyEqual(*a, *b);
}

bool StructurallyEqual(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, stmt::LocalDecl>) {
          return x.type == y.type && x.name == y.name &&
                 StructurallyEqual(x.init, y.init);
        } else if constexpr (std::is_same_v<T, stmt::Assign>) {
          return x.name == y.name && StructurallyEqual(x.value, y.value);
        } else if constexpr (std::is_same_v<T, stmt::Return>) {
          return StructurallyEqual(x.value, y.value);
        } else {
          return StructurallyEqual(x.cond, y.cond) &&
                 StructurallyEqual(*x.then, *y.then);
        }
      },
      a.node);
}

bool StructurallyEqual(const Body& a, const Body& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (!StructurallyEqual(*a[i], *b[i])) return false;
  }
  return true;
}

bool StructurallyEqual(const MethodDecl& a, const MethodDecl& b) {
  if (!EqualSignature(a.sig, b.sig) || a.visibility != b.visibility ||
      !EqualContract(a.contract, b.contract) ||
      a.body.has_value() != b.body.has_value()) {
    return false;
  }
  return !a.body || StructurallyEqual(*a.body, *b.body);
}

bool StructurallyEqual(const TraitValue& a, const TraitValue& b) {
  if (a.methods.size() != b.methods.size()) return false;
  for (auto ia = a.methods.begin(), ib = b.methods.begin();
       ia != a.methods.end(); ++ia, ++ib) {
    if (ia->first != ib->first || !StructurallyEqual(ia->second, ib->second)) {
      return false;
    }
  }
  return true;
}

bool StructurallyEqual(const Program& a, const Program& b) {
  if (a.decls.size() != b.decls.size()) return false;
  for (size_t i = 0; i < a.decls.size(); ++i) {
    const Decl& x = a.decls[i];
    const Decl& y = b.decls[i];
    if (x.index() != y.index() || DeclName(x) != DeclName(y)) return false;
    if (const auto* t = std::get_if<TraitDecl>(&x)) {
      if (!StructurallyEqual(t->init, std::get<TraitDecl>(y).init)) {
        return false;
      }
    } else if (const auto* c = std::get_if<ClassDecl>(&x)) {
      if (!StructurallyEqual(c->init, std::get<ClassDecl>(y).init)) {
        return false;
      }
    } else {
      const auto& f = std::get<FunDecl>(x);
      const auto& g = std::get<FunDecl>(y);
      if (!EqualSignature(f.sig, g.sig) ||
          !EqualContract(f.contract, g.contract) ||
          !StructurallyEqual(f.body, g.body)) {
        return false;
      }
    }
  }
  return true;
}

ParamMap PositionalParamMap(const Signature& from, const Signature& to) {
  ParamMap map;
  for (size_t i = 0; i < from.Arity() && i < to.Arity(); ++i) {
    map[from.params[i].name] = to.params[i].name;
  }
  return map;
}

bool AlphaStructuralEq(const Expr& a, const Expr& b,
                       const ParamMap& param_map) {
  AlphaCtx ctx{&param_map, {}};
  for (const auto& [from, to] : param_map) ctx.image.insert(to);
  return AlphaEq(a, b, &ctx);
}

// ---------------------------------------------------------------------------
// Traversal

void Visit(const Expr& e, const std::function<void(const Expr&)>& fn,
           bool into_trait_lits) {
  fn(e);
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, expr::Unary>) {
          Visit(*x.operand, fn, into_trait_lits);
        } else if constexpr (std::is_same_v<T, expr::Binary> ||
                             std::is_same_v<T, expr::Sum>) {
          Visit(*x.lhs, fn, into_trait_lits);
          Visit(*x.rhs, fn, into_trait_lits);
        } else if constexpr (std::is_same_v<T, expr::Call>) {
          if (x.receiver) Visit(*x.receiver, fn, into_trait_lits);
          for (const auto& a : x.args) Visit(*a, fn, into_trait_lits);
        } else if constexpr (std::is_same_v<T, expr::Adapt>) {
          Visit(*x.target, fn, into_trait_lits);
        } else if constexpr (std::is_same_v<T, expr::TraitLit>) {
          if (!into_trait_lits) return;
          for (const auto& m : x.methods) {
            for (const auto& p : m.contract.pre) Visit(*p, fn, true);
            for (const auto& p : m.contract.post) Visit(*p, fn, true);
            if (m.body) {
              for (const auto& s : *m.body) Visit(*s, fn, true);
            }
          }
        }
      },
      e.node);
}

void Visit(const Stmt& s, const std::function<void(const Expr&)>& fn,
           bool into_trait_lits) {
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::LocalDecl>) {
          Visit(*x.init, fn, into_trait_lits);
        } else if constexpr (std::is_same_v<T, stmt::Assign>) {
          Visit(*x.value, fn, into_trait_lits);
        } else if constexpr (std::is_same_v<T, stmt::Return>) {
          Visit(*x.value, fn, into_trait_lits);
        } else {
          Visit(*x.cond, fn, into_trait_lits);
          Visit(*x.then, fn, into_trait_lits);
        }
      },
      s.node);
}

ExprPtr Rewrite(const ExprPtr& e,
                const std::function<ExprPtr(const ExprPtr&)>& fn) {
  ExprPtr rebuilt = std::visit(
      [&](const auto& x) -> ExprPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, expr::Unary>) {
          auto operand = Rewrite(x.operand, fn);
          if (operand == x.operand) return e;
          return MakeUnary(x.op, operand, e->span);
        } else if constexpr (std::is_same_v<T, expr::Binary>) {
          auto lhs = Rewrite(x.lhs, fn);
          auto rhs = Rewrite(x.rhs, fn);
          if (lhs == x.lhs && rhs == x.rhs) return e;
          return MakeBinary(x.op, lhs, rhs, e->span);
        } else if constexpr (std::is_same_v<T, expr::Sum>) {
          auto lhs = Rewrite(x.lhs, fn);
          auto rhs = Rewrite(x.rhs, fn);
          if (lhs == x.lhs && rhs == x.rhs) return e;
          return MakeSum(lhs, rhs, e->span);
        } else if constexpr (std::is_same_v<T, expr::Call>) {
          bool changed = false;
          ExprPtr receiver;
          if (x.receiver) {
            receiver = Rewrite(x.receiver, fn);
            changed |= receiver != x.receiver;
          }
          std::vector<ExprPtr> args;
          for (const auto& a : x.args) {
            args.push_back(Rewrite(a, fn));
            changed |= args.back() != a;
          }
          if (!changed) return e;
          return MakeCall(receiver, x.name, std::move(args), e->span);
        } else if constexpr (std::is_same_v<T, expr::Adapt>) {
          auto target = Rewrite(x.target, fn);
          if (target == x.target) return e;
          return MakeAdapt(target, x.adaptation, e->span);
        } else {
          return e;
        }
      },
      e->node);
  ExprPtr replaced = fn(rebuilt);
  return replaced ? replaced : rebuilt;
}

StmtPtr Rewrite(const StmtPtr& s,
                const std::function<ExprPtr(const ExprPtr&)>& fn) {
  return std::visit(
      [&](const auto& x) -> StmtPtr {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, stmt::LocalDecl>) {
          auto init = Rewrite(x.init, fn);
          if (init == x.init) return s;
          return MakeLocal(x.type, x.name, init, s->span);
        } else if constexpr (std::is_same_v<T, stmt::Assign>) {
          auto value = Rewrite(x.value, fn);
          if (value == x.value) return s;
          return MakeAssign(x.name, value, s->span);
        } else if constexpr (std::is_same_v<T, stmt::Return>) {
          auto value = Rewrite(x.value, fn);
          if (value == x.value) return s;
          return MakeReturn(value, s->span);
        } else {
          auto cond = Rewrite(x.cond, fn);
          auto then = Rewrite(x.then, fn);
          if (cond == x.cond && then == x.then) return s;
          return MakeIf(cond, then, s->span);
        }
      },
      s->node);
}

Body Rewrite(const Body& body,
             const std::function<ExprPtr(const ExprPtr&)>& fn) {
  Body out;
  out.reserve(body.size());
  for (const auto& s : body) out.push_back(Rewrite(s, fn));
  return out;
}

bool IsSiblingCall(const expr::Call& call) {
  return call.receiver == nullptr || call.receiver->Is<expr::This>();
}

std::set<std::string> CalledMethods(const Expr& e) {
  std::set<std::string> out;
  Visit(e, [&](const Expr& n) {
    if (const auto* c = n.As<expr::Call>(); c && IsSiblingCall(*c)) {
      out.insert(c->name);
    }
  });
  return out;
}

std::set<std::string> CalledMethods(const Body& body) {
  std::set<std::string> out;
  for (const auto& s : body) {
    Visit(*s, [&](const Expr& n) {
      if (const auto* c = n.As<expr::Call>(); c && IsSiblingCall(*c)) {
        out.insert(c->name);
      }
    });
  }
  return out;
}

std::set<std::string> CalledMethods(const MethodDecl& m,
                                    bool include_contract) {
  std::set<std::string> out;
  if (m.body) out = CalledMethods(*m.body);
  if (include_contract) {
    for (const auto& p : m.contract.pre) out.merge(CalledMethods(*p));
    for (const auto& p : m.contract.post) out.merge(CalledMethods(*p));
  }
  return out;
}

bool MentionsVar(const Expr& e, const std::string& name) {
  bool found = false;
  Visit(e, [&](const Expr& n) {
    if (const auto* v = n.As<expr::Var>(); v && v->name == name) found = true;
  });
  return found;
}

ExprPtr RenameCalls(const ExprPtr& e,
                    const std::map<std::string, std::string>& renames) {
  if (renames.empty()) return e;
  return Rewrite(e, [&](const ExprPtr& n) -> ExprPtr {
    const auto* c = n->As<expr::Call>();
    if (!c || !IsSiblingCall(*c)) return nullptr;
    auto it = renames.find(c->name);
    if (it == renames.end()) return nullptr;
    return MakeCall(c->receiver, it->second, c->args, n->span);
  });
}

MethodDecl RenameCalls(const MethodDecl& m,
                       const std::map<std::string, std::string>& renames) {
  MethodDecl out = m;
  for (auto& p : out.contract.pre) p = RenameCalls(p, renames);
  for (auto& p : out.contract.post) p = RenameCalls(p, renames);
  if (out.body) {
    *out.body = Rewrite(*out.body, [&](const ExprPtr& n) -> ExprPtr {
      const auto* c = n->As<expr::Call>();
      if (!c || !IsSiblingCall(*c)) return nullptr;
      auto it = renames.find(c->name);
      if (it == renames.end()) return nullptr;
      return MakeCall(c->receiver, it->second, c->args, n->span);
    });
  }
  return out;
}

ExprPtr RenameVars(const ExprPtr& e,
                   const std::map<std::string, std::string>& renames) {
  if (renames.empty()) return e;
  return Rewrite(e, [&](const ExprPtr& n) -> ExprPtr {
    const auto* v = n->As<expr::Var>();
    if (!v) return nullptr;
    auto it = renames.find(v->name);
    if (it == renames.end()) return nullptr;
    return MakeVar(it->second, n->span);
  });
}

int CountBinary(const Expr& e, BinaryOp op) {
  int count = 0;
  Visit(e, [&](const Expr& n) {
    if (const auto* b = n.As<expr::Binary>(); b && b->op == op) ++count;
  });
  return count;
}

int CountBinary(const Body& body, BinaryOp op) {
  int count = 0;
  for (const auto& s : body) {
    Visit(*s, [&](const Expr& n) {
      if (const auto* b = n.As<expr::Binary>(); b && b->op == op) ++count;
    });
  }
  return count;
}

std::optional<std::string> Validate(const TraitValue& t) {
  auto check_calls = [&](const Expr& e,
                         const std::string& where) -> std::optional<std::string> {
    std::optional<std::string> problem;
    Visit(e, [&](const Expr& n) {
      if (problem) return;
      const auto* c = n.As<expr::Call>();
      if (!c || !IsSiblingCall(*c)) return;
      const MethodDecl* callee = t.Find(c->name);
      if (callee == nullptr) {
        problem = where + " calls missing method '" + c->name + "'";
      } else if (callee->Arity() != c->args.size()) {
        problem = where + " calls '" + c->name + "' with wrong arity";
      }
    });
    return problem;
  };

  for (const auto& [name, m] : t.methods) {
    if (name != m.Name()) return "method key '" + name + "' != declared name";
    if (m.IsAbstract() && !m.IsPublic()) {
      return "abstract method '" + name + "' is private";
    }
    std::set<std::string> seen;
    for (const auto& p : m.sig.params) {
      if (p.name == "this" || p.name == "result") {
        return "method '" + name + "' uses reserved parameter name";
      }
      if (!seen.insert(p.name).second) {
        return "method '" + name + "' repeats parameter '" + p.name + "'";
      }
    }
    for (const auto& p : m.contract.pre) {
      if (auto e = check_calls(*p, "requires of '" + name + "'")) return e;
    }
    for (const auto& p : m.contract.post) {
      if (auto e = check_calls(*p, "ensures of '" + name + "'")) return e;
    }
    if (m.body) {
      for (const auto& s : *m.body) {
        std::optional<std::string> problem;
        Visit(*s, [&](const Expr& n) {
          if (problem) return;
          if (n.Is<expr::Call>()) problem = check_calls(n, "body of '" + name + "'");
        });
        if (problem) return problem;
      }
    }
  }
  return std::nullopt;
}

}  // namespace ctrait

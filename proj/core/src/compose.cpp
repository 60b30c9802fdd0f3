#include "ctrait/compose.h"

#include <algorithm>
#include <cctype>

#include "ctrait/printer.h"

namespace ctrait {

const char* Code(ComposeErrorKind kind) {
  switch (kind) {
    case ComposeErrorKind::BothConcrete: return "BothConcrete";
    case ComposeErrorKind::SignatureMismatch: return "SignatureMismatch";
    case ComposeErrorKind::ContractMismatch: return "ContractMismatch";
    case ComposeErrorKind::UnknownMethod: return "UnknownMethod";
    case ComposeErrorKind::RenameCollision: return "RenameCollision";
    case ComposeErrorKind::HiddenAbstractStillCalled:
      return "HiddenAbstractStillCalled";
    case ComposeErrorKind::PrivateNameClash: return "PrivateNameClash";
    case ComposeErrorKind::RequiresMentionsHidden:
      return "RequiresMentionsHidden";
  }
  return "ComposeError";
}

ComposeError::ComposeError(ComposeErrorKind kind, std::string method,
                           std::string message, std::string left_contract,
                           std::string right_contract)
    : std::runtime_error(std::string(Code(kind)) + ": " + message),
      kind_(kind),
      method_(std::move(method)),
      left_contract_(std::move(left_contract)),
      right_contract_(std::move(right_contract)) {}

namespace {

void CheckResult(const TraitValue& t, const char* op) {
  if (auto problem = Validate(t)) {
    throw std::logic_error(std::string(op) + " produced an invalid trait: " +
                           *problem);
  }
}

bool MultisetEqual(const std::vector<ExprPtr>& a, const std::vector<ExprPtr>& b,
                   const ParamMap& param_map) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (const auto& x : a) {
    bool matched = false;
    for (size_t j = 0; j < b.size() && !matched; ++j) {
      if (!used[j] && AlphaStructuralEq(*x, *b[j], param_map)) {
        used[j] = true;
        matched = true;
      }
    }
    if (!matched) return false;
  }
  return true;
}

bool SameTypes(const Signature& a, const Signature& b) {
  if (a.Arity() != b.Arity() || !(a.ret == b.ret)) return false;
  for (size_t i = 0; i < a.Arity(); ++i) {
    if (!(a.params[i].type == b.params[i].type)) return false;
  }
  return true;
}

// One line: `@requires(..) @ensures(..) Int f(Int x)`.
std::string DescribeMethod(const MethodDecl& m) {
  std::string out;
  for (const auto& p : m.contract.pre) out += "@requires(" + Print(p) + ") ";
  for (const auto& p : m.contract.post) out += "@ensures(" + Print(p) + ") ";
  return out + PrintSignature(m.sig);
}

}  // namespace

bool ContractCompatible(const Contract& a, const Contract& b,
                        const ParamMap& param_map) {
  return MultisetEqual(a.pre, b.pre, param_map) &&
         MultisetEqual(a.post, b.post, param_map);
}

TraitValue Sum(const TraitValue& lhs, const TraitValue& rhs) {
  TraitValue out = lhs;
  for (const auto& [name, r] : rhs.methods) {
    const MethodDecl* l = lhs.Find(name);
    if (l == nullptr) {
      out.methods.emplace(name, r);
      continue;
    }
    if (!l->IsPublic() || !r.IsPublic()) {
      throw ComposeError(ComposeErrorKind::PrivateNameClash, name,
                         "private method '" + name +
                             "' collides with a method of the other operand");
    }
    if (!l->IsAbstract() && !r.IsAbstract()) {
      throw ComposeError(ComposeErrorKind::BothConcrete, name,
                         "both operands define '" + name +
                             "'; at least one must be abstract");
    }
    if (!SameTypes(l->sig, r.sig)) {
      throw ComposeError(ComposeErrorKind::SignatureMismatch, name,
                         "incompatible signatures for '" + name + "': " +
                             PrintSignature(l->sig) + " vs " +
                             PrintSignature(r.sig));
    }
    if (!ContractCompatible(l->contract, r.contract,
                            PositionalParamMap(l->sig, r.sig))) {
      throw ComposeError(ComposeErrorKind::ContractMismatch, name,
                         "contracts of '" + name + "' are not identical",
                         DescribeMethod(*l), DescribeMethod(r));
    }
    if (l->IsAbstract() && !r.IsAbstract()) out.methods[name] = r;
  }
  CheckResult(out, "sum");
  return out;
}

TraitValue Rename(const TraitValue& t,
                  const std::vector<std::pair<SigRef, SigRef>>& mappings) {
  std::map<std::string, std::string> renames;
  for (const auto& [from, to] : mappings) {
    const MethodDecl* m = t.Find(from.name);
    if (m == nullptr || !m->IsPublic()) {
      throw ComposeError(ComposeErrorKind::UnknownMethod, from.name,
                         "cannot rename '" + PrintSigRef(from) +
                             "': no such public method");
    }
    if (from.params.size() != m->Arity() || to.params.size() != m->Arity()) {
      throw ComposeError(ComposeErrorKind::SignatureMismatch, from.name,
                         "rename " + PrintSigRef(from) + " -> " +
                             PrintSigRef(to) + " does not match arity " +
                             std::to_string(m->Arity()));
    }
    if (!renames.emplace(from.name, to.name).second) {
      throw ComposeError(ComposeErrorKind::RenameCollision, from.name,
                         "'" + from.name + "' is renamed twice");
    }
  }
  std::set<std::string> targets;
  for (const auto& [from, to] : renames) {
    if (!targets.insert(to).second) {
      throw ComposeError(ComposeErrorKind::RenameCollision, to,
                         "two methods renamed to '" + to + "'");
    }
    if (t.Has(to) && !renames.count(to)) {
      throw ComposeError(ComposeErrorKind::RenameCollision, to,
                         "rename target '" + to + "' is already taken");
    }
  }
  TraitValue out;
  for (const auto& [name, m] : t.methods) {
    MethodDecl renamed = RenameCalls(m, renames);
    if (auto it = renames.find(name); it != renames.end()) {
      renamed.sig.name = it->second;
    }
    out.methods.emplace(renamed.Name(), std::move(renamed));
  }
  CheckResult(out, "rename");
  return out;
}

namespace {

// Private methods reachable from no public method through any body or
// contract are dead.
void DropUnreachablePrivate(TraitValue& t) {
  std::set<std::string> live;
  std::vector<std::string> work;
  for (const auto& [name, m] : t.methods) {
    if (m.IsPublic()) {
      live.insert(name);
      work.push_back(name);
    }
  }
  while (!work.empty()) {
    std::string name = work.back();
    work.pop_back();
    const MethodDecl* m = t.Find(name);
    if (m == nullptr) continue;
    for (const auto& callee : CalledMethods(*m, /*include_contract=*/true)) {
      if (live.insert(callee).second) work.push_back(callee);
    }
  }
  for (auto it = t.methods.begin(); it != t.methods.end();) {
    if (!live.count(it->first)) {
      it = t.methods.erase(it);
    } else {
      ++it;
    }
  }
}

bool IsStraightLine(const Body& body) {
  if (body.empty()) return false;
  for (size_t i = 0; i + 1 < body.size(); ++i) {
    if (!std::holds_alternative<stmt::LocalDecl>(body[i]->node)) return false;
  }
  return std::holds_alternative<stmt::Return>(body.back()->node);
}

// Methods that can reach themselves through body calls.
std::set<std::string> RecursiveMethods(const TraitValue& t) {
  std::map<std::string, std::set<std::string>> edges;
  for (const auto& [name, m] : t.methods) {
    if (m.body) edges[name] = CalledMethods(*m.body);
  }
  std::set<std::string> out;
  for (const auto& [start, _] : edges) {
    std::set<std::string> seen;
    std::vector<std::string> work(edges[start].begin(), edges[start].end());
    while (!work.empty()) {
      std::string n = work.back();
      work.pop_back();
      if (n == start) {
        out.insert(start);
        break;
      }
      if (!seen.insert(n).second) continue;
      if (auto it = edges.find(n); it != edges.end()) {
        work.insert(work.end(), it->second.begin(), it->second.end());
      }
    }
  }
  return out;
}

void CollectLocals(const Stmt& s, std::set<std::string>& names) {
  if (const auto* l = std::get_if<stmt::LocalDecl>(&s.node)) {
    names.insert(l->name);
  } else if (const auto* i = std::get_if<stmt::If>(&s.node)) {
    CollectLocals(*i->then, names);
  }
}

class Inliner {
 public:
  Inliner(const TraitValue& trait, const std::set<std::string>& inlinable,
          const MethodDecl& target)
      : trait_(trait), inlinable_(inlinable) {
    for (const auto& p : target.sig.params) used_.insert(p.name);
    for (const auto& s : *target.body) CollectLocals(*s, used_);
  }

  Body Run(const Body& body) {
    Body out;
    for (const auto& s : body) {
      Body prelude;
      StmtPtr rewritten = std::visit(
          [&](const auto& x) -> StmtPtr {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, stmt::LocalDecl>) {
              auto init = Expr(x.init, prelude);
              return init == x.init ? s : MakeLocal(x.type, x.name, init, s->span);
            } else if constexpr (std::is_same_v<T, stmt::Return>) {
              auto value = Expr(x.value, prelude);
              return value == x.value ? s : MakeReturn(value, s->span);
            } else if constexpr (std::is_same_v<T, stmt::If>) {
              // The branch runs conditionally, so only the condition is a
              // safe place to hoist bindings in front of.
              auto cond = Expr(x.cond, prelude);
              return cond == x.cond ? s : MakeIf(cond, x.then, s->span);
            } else {
              return s;
            }
          },
          s->node);
      out.insert(out.end(), prelude.begin(), prelude.end());
      out.push_back(rewritten);
    }
    return out;
  }

  bool changed() const { return changed_; }

 private:
  std::string Fresh(const std::string& name) {
    std::string base = name;
    while (base.size() > 1 &&
           std::isdigit(static_cast<unsigned char>(base.back()))) {
      base.pop_back();
    }
    for (int k = 0;; ++k) {
      std::string candidate = base + std::to_string(k);
      if (used_.insert(candidate).second) return candidate;
    }
  }

  ExprPtr Expr(const ExprPtr& e, Body& prelude) {
    if (const auto* b = e->As<expr::Binary>()) {
      auto lhs = Expr(b->lhs, prelude);
      // The right operand of && and || is evaluated conditionally.
      auto rhs = (b->op == BinaryOp::And || b->op == BinaryOp::Or)
                     ? b->rhs
                     : Expr(b->rhs, prelude);
      if (lhs == b->lhs && rhs == b->rhs) return e;
      return MakeBinary(b->op, lhs, rhs, e->span);
    }
    if (const auto* u = e->As<expr::Unary>()) {
      auto operand = Expr(u->operand, prelude);
      if (operand == u->operand) return e;
      return MakeUnary(u->op, operand, e->span);
    }
    const auto* c = e->As<expr::Call>();
    if (c == nullptr) return e;
    std::vector<ExprPtr> args;
    bool args_changed = false;
    for (const auto& a : c->args) {
      args.push_back(Expr(a, prelude));
      args_changed |= args.back() != a;
    }
    if (!IsSiblingCall(*c) || !inlinable_.count(c->name)) {
      if (!args_changed) return e;
      return MakeCall(c->receiver, c->name, std::move(args), e->span);
    }
    const MethodDecl& callee = *trait_.Find(c->name);
    std::map<std::string, std::string> renames;
    for (size_t i = 0; i < callee.Arity(); ++i) {
      const Param& p = callee.sig.params[i];
      std::string fresh = Fresh(p.name);
      prelude.push_back(MakeLocal(p.type, fresh, args[i], e->span));
      renames[p.name] = fresh;
    }
    const Body& body = *callee.body;
    for (size_t i = 0; i + 1 < body.size(); ++i) {
      const auto& local = std::get<stmt::LocalDecl>(body[i]->node);
      ExprPtr init = RenameVars(local.init, renames);
      std::string fresh = Fresh(local.name);
      prelude.push_back(MakeLocal(local.type, fresh, init, body[i]->span));
      renames[local.name] = fresh;
    }
    changed_ = true;
    return RenameVars(std::get<stmt::Return>(body.back()->node).value,
                      renames);
  }

  const TraitValue& trait_;
  const std::set<std::string>& inlinable_;
  std::set<std::string> used_;
  bool changed_ = false;
};

}  // namespace

TraitValue InlineAndDrop(const TraitValue& t) {
  TraitValue out = t;
  for (;;) {
    std::set<std::string> recursive = RecursiveMethods(out);
    std::set<std::string> inlinable;
    for (const auto& [name, m] : out.methods) {
      if (!m.IsPublic() && m.body && IsStraightLine(*m.body) &&
          !recursive.count(name)) {
        inlinable.insert(name);
      }
    }
    if (inlinable.empty()) break;
    bool changed = false;
    TraitValue next = out;
    for (auto& [name, m] : next.methods) {
      if (!m.body) continue;
      Inliner inliner(out, inlinable, m);
      Body body = inliner.Run(*m.body);
      if (inliner.changed()) {
        m.body = std::move(body);
        changed = true;
      }
    }
    out = std::move(next);
    if (!changed) break;
  }
  DropUnreachablePrivate(out);
  return out;
}

TraitValue Hide(const TraitValue& t, const std::vector<SigRef>& names,
                std::vector<ComposeWarning>* warnings) {
  TraitValue work = t;
  std::set<std::string> hidden;
  std::set<std::string> hidden_abstract;
  for (const auto& ref : names) {
    auto it = work.methods.find(ref.name);
    if (it == work.methods.end() || !it->second.IsPublic()) {
      throw ComposeError(ComposeErrorKind::UnknownMethod, ref.name,
                         "cannot hide '" + PrintSigRef(ref) +
                             "': no such public method");
    }
    if (ref.params.size() != it->second.Arity()) {
      throw ComposeError(ComposeErrorKind::SignatureMismatch, ref.name,
                         "hide " + PrintSigRef(ref) + " does not match arity " +
                             std::to_string(it->second.Arity()));
    }
    it->second.visibility = Visibility::Private;
    hidden.insert(ref.name);
    if (it->second.IsAbstract()) hidden_abstract.insert(ref.name);
  }

  auto mentions_hidden = [&](const ExprPtr& p) {
    for (const auto& callee : CalledMethods(*p)) {
      if (hidden.count(callee)) return true;
    }
    return false;
  };

  for (auto& [name, m] : work.methods) {
    if (!m.IsPublic()) continue;
    for (const auto& p : m.contract.pre) {
      if (mentions_hidden(p)) {
        throw ComposeError(ComposeErrorKind::RequiresMentionsHidden, name,
                           "precondition '" + Print(p) + "' of '" + name +
                               "' mentions a hidden method");
      }
    }
    std::vector<ExprPtr> kept;
    for (const auto& p : m.contract.post) {
      if (!mentions_hidden(p)) {
        kept.push_back(p);
      } else if (warnings) {
        warnings->push_back({ComposeWarning::ContractMentionsHidden, name,
                             "dropped @ensures(" + Print(p) + ")"});
      }
    }
    m.contract.post = std::move(kept);
  }

  work = InlineAndDrop(work);

  for (const auto& name : hidden_abstract) {
    if (work.Has(name)) {
      throw ComposeError(ComposeErrorKind::HiddenAbstractStillCalled, name,
                         "hidden abstract method '" + name +
                             "' is still called and can never be supplied");
    }
    if (warnings) {
      warnings->push_back({ComposeWarning::HiddenAbstractDeleted, name,
                           "hidden abstract method was never called"});
    }
  }
  CheckResult(work, "hide");
  return work;
}

Shape StructuralShape(const TraitValue& t) {
  Shape shape;
  for (const auto& [name, m] : t.methods) {
    if (!m.IsPublic()) continue;
    std::map<std::string, std::string> renames;
    Signature sig = m.sig;
    for (size_t i = 0; i < sig.params.size(); ++i) {
      std::string positional = "p" + std::to_string(i + 1);
      renames[sig.params[i].name] = positional;
      sig.params[i].name = positional;
    }
    auto conjuncts = [&](const std::vector<ExprPtr>& list) {
      std::vector<std::string> out;
      for (const auto& p : list) out.push_back(Print(RenameVars(p, renames)));
      std::sort(out.begin(), out.end());
      return out;
    };
    std::string text = m.IsAbstract() ? "abstract " : "";
    text += PrintSignature(sig);
    for (const auto& p : conjuncts(m.contract.pre)) {
      text += " @requires(" + p + ")";
    }
    for (const auto& p : conjuncts(m.contract.post)) {
      text += " @ensures(" + p + ")";
    }
    shape.push_back({text});
  }
  return shape;
}

}  // namespace ctrait

#include "ctrait/verifier.h"

#include <algorithm>
#include <set>

#include "ctrait/printer.h"

namespace ctrait {

const char* Code(VerifyStatus status) {
  switch (status) {
    case VerifyStatus::Pass: return "Pass";
    case VerifyStatus::Vacuous: return "Vacuous";
    case VerifyStatus::Inconclusive: return "Inconclusive";
    case VerifyStatus::Fail: return "Fail";
  }
  return "Unknown";
}

const char* Code(FailureKind kind) {
  switch (kind) {
    case FailureKind::Ensures: return "Ensures";
    case FailureKind::CalleeRequires: return "CalleeRequires";
    case FailureKind::Fault: return "Fault";
  }
  return "Unknown";
}

std::string Describe(const Counterexample& cex) {
  std::string out = cex.method + "(" + Render(cex.inputs) + "): ";
  switch (cex.kind) {
    case FailureKind::Ensures:
      out += "@ensures(" + cex.predicate_text + ") fails";
      break;
    case FailureKind::CalleeRequires:
      out += "@requires(" + cex.predicate_text + ") of " + cex.contract_owner +
             " fails";
      break;
    case FailureKind::Fault:
      out += cex.detail;
      break;
  }
  if (!cex.predicate_bindings.empty()) {
    out += " with " + Render(cex.predicate_bindings);
  }
  for (const auto& t : cex.trace) {
    out += "; " + t.method + "(";
    for (size_t i = 0; i < t.args.size(); ++i) {
      out += (i ? ", " : "") + Render(t.args[i]);
    }
    out += ")=" + Render(t.value) + (t.modeled ? " [contract]" : "");
  }
  return out;
}

VerifyStatus VerifyReport::Overall() const {
  VerifyStatus worst = VerifyStatus::Pass;
  for (const auto& m : methods) worst = std::max(worst, m.status);
  return worst;
}

const MethodReport* VerifyReport::Find(const std::string& method) const {
  for (const auto& m : methods) {
    if (m.method == method) return &m;
  }
  return nullptr;
}

namespace {

constexpr int kMaxNesting = 64;

// Thrown when a scenario must be abandoned because a modeled call has no
// value consistent with its contract.
struct VacuousPath {};

struct Failure {
  Counterexample cex;
};

enum class Outcome { PreFalse, Vacuous, Ok };

std::vector<Value> Domain(const TypeName& type, long long lo, long long hi) {
  std::vector<Value> out;
  switch (type.base) {
    case BaseType::Bool:
      out = {Value(false), Value(true)};
      break;
    case BaseType::String:
      out = {Value(""), Value("a"), Value("ab")};
      break;
    default:
      for (long long i = lo; i <= hi; ++i) out.emplace_back(BigInt(i));
  }
  return out;
}

std::string CallKey(const std::string& name, const std::vector<Value>& args) {
  std::string key = name + "(";
  for (const auto& a : args) key += Render(a) + ",";
  return key + ")";
}

Evaluator::Env Bind(const MethodDecl& m, const std::vector<Value>& args) {
  Evaluator::Env env;
  for (size_t i = 0; i < m.Arity(); ++i) env[m.sig.params[i].name] = args[i];
  return env;
}

Bindings BindingList(const MethodDecl& m, const std::vector<Value>& args) {
  Bindings out;
  for (size_t i = 0; i < m.Arity(); ++i) {
    out.emplace_back(m.sig.params[i].name, args[i]);
  }
  return out;
}

// The E of a `result == E` (or `E == result`) conjunct not mentioning result.
const Expr* FunctionalRhs(const ExprPtr& p) {
  const auto* b = p->As<expr::Binary>();
  if (b == nullptr || b->op != BinaryOp::Eq) return nullptr;
  auto is_result = [](const ExprPtr& e) {
    const auto* v = e->As<expr::Var>();
    return v != nullptr && v->name == "result";
  };
  if (is_result(b->lhs) && !MentionsVar(*b->rhs, "result")) return b->rhs.get();
  if (is_result(b->rhs) && !MentionsVar(*b->lhs, "result")) return b->lhs.get();
  return nullptr;
}

// One execution of one method on one input tuple, following a fixed prefix
// of havoc choices (later choices default to the first option).
class Scenario : public Evaluator {
 public:
  Scenario(const TraitValue& trait, const VerifyConfig& config,
           const MethodDecl& method, const std::vector<Value>& inputs,
           std::vector<size_t> prefix)
      : trait_(trait),
        config_(config),
        method_(method),
        inputs_(inputs),
        prefix_(std::move(prefix)) {}

  Outcome Run() {
    try {
      return RunUnguarded();
    } catch (const VacuousPath&) {
      return Outcome::Vacuous;
    } catch (const RuntimeError& e) {
      Counterexample cex = Base();
      cex.kind = FailureKind::Fault;
      cex.contract_owner = method_.Name();
      cex.detail = e.what();
      throw Failure{std::move(cex)};
    }
  }

  const std::vector<size_t>& taken() const { return taken_; }
  const std::vector<size_t>& options() const { return options_; }

 protected:
  Value CallUnqualified(const std::string& name,
                        std::vector<Value> args) override {
    const MethodDecl* callee = trait_.Find(name);
    if (callee == nullptr) {
      throw RuntimeError(RuntimeErrorKind::NoSuchMethod, "no method " + name);
    }
    bool direct = direct_;
    direct_ = false;
    if (direct) {
      Env env = Bind(*callee, args);
      for (const auto& p : callee->contract.pre) {
        if (!Holds(p, env)) {
          Counterexample cex = Base();
          cex.kind = FailureKind::CalleeRequires;
          cex.contract_owner = name;
          cex.predicate = p;
          cex.predicate_text = Print(p);
          cex.predicate_bindings = BindingList(*callee, args);
          throw Failure{std::move(cex)};
        }
      }
    }
    std::string key = CallKey(name, args);
    Value result;
    if (auto it = memo_.find(key); it != memo_.end()) {
      result = it->second;
    } else {
      bool executing =
          std::find(active_.begin(), active_.end(), name) != active_.end();
      bool modeled = callee->IsAbstract() || executing;
      if (!modeled) {
        if (active_.size() > kMaxNesting) {
          throw RuntimeError(RuntimeErrorKind::DepthLimit,
                             "nesting limit reached calling " + name);
        }
        active_.push_back(name);
        Env env = Bind(*callee, args);
        result = Exec(*callee->body, env, name);
        active_.pop_back();
      } else {
        if (!modeling_.insert(key).second) {
          throw RuntimeError(RuntimeErrorKind::DepthLimit,
                             "contract of " + name + " depends on itself");
        }
        result = Model(*callee, args);
        modeling_.erase(key);
      }
      memo_.emplace(key, result);
      trace_.push_back({name, args, result, modeled});
    }
    direct_ = direct;
    return result;
  }

 private:
  Outcome RunUnguarded() {
    active_.push_back(method_.Name());
    Env env = Bind(method_, inputs_);
    for (const auto& p : method_.contract.pre) {
      if (!Holds(p, env)) return Outcome::PreFalse;
    }
    Env locals = env;
    direct_ = true;
    Value result = Exec(*method_.body, locals, method_.Name());
    direct_ = false;
    env["result"] = result;
    for (const auto& p : method_.contract.post) {
      if (!Holds(p, env)) {
        Counterexample cex = Base();
        cex.kind = FailureKind::Ensures;
        cex.contract_owner = method_.Name();
        cex.predicate = p;
        cex.predicate_text = Print(p);
        cex.predicate_bindings = BindingList(method_, inputs_);
        cex.predicate_bindings.emplace_back("result", result);
        throw Failure{std::move(cex)};
      }
    }
    return Outcome::Ok;
  }

  Value Model(const MethodDecl& callee, const std::vector<Value>& args) {
    Env env = Bind(callee, args);
    const auto& post = callee.contract.post;
    for (size_t i = 0; i < post.size(); ++i) {
      const Expr* rhs = FunctionalRhs(post[i]);
      if (rhs == nullptr) continue;
      Value v = Eval(*rhs, env);
      env["result"] = v;
      for (size_t j = 0; j < post.size(); ++j) {
        if (j != i && !Holds(post[j], env)) throw VacuousPath{};
      }
      return v;
    }
    std::vector<Value> satisfying;
    for (auto& candidate :
         Domain(callee.sig.ret, config_.havoc_lo, config_.havoc_hi)) {
      env["result"] = candidate;
      bool ok = true;
      for (const auto& p : post) {
        try {
          ok = Holds(p, env);
        } catch (const RuntimeError&) {
          ok = false;
        }
        if (!ok) break;
      }
      if (ok) satisfying.push_back(std::move(candidate));
    }
    if (satisfying.empty()) throw VacuousPath{};
    return satisfying[Choose(satisfying.size())];
  }

  size_t Choose(size_t n) {
    size_t pos = taken_.size();
    size_t choice = pos < prefix_.size() ? prefix_[pos] : 0;
    taken_.push_back(choice);
    options_.push_back(n);
    return choice;
  }

  bool Holds(const ExprPtr& p, const Env& env) {
    bool saved = direct_;
    direct_ = false;
    Value v = Eval(*p, env);
    direct_ = saved;
    return v.IsBool() && v.AsBool();
  }

  Counterexample Base() const {
    Counterexample cex;
    cex.method = method_.Name();
    cex.inputs = BindingList(method_, inputs_);
    cex.trace = trace_;
    cex.choices = taken_;
    return cex;
  }

  const TraitValue& trait_;
  const VerifyConfig& config_;
  const MethodDecl& method_;
  const std::vector<Value>& inputs_;
  std::vector<size_t> prefix_;
  std::vector<size_t> taken_;
  std::vector<size_t> options_;
  std::vector<std::string> active_;
  std::set<std::string> modeling_;
  std::map<std::string, Value> memo_;
  std::vector<TraceEntry> trace_;
  // Set while evaluating the verified method's own body, where callee
  // preconditions must be established.
  bool direct_ = false;
};

// Enumerates every parameter tuple.
std::vector<std::vector<Value>> InputTuples(const MethodDecl& m,
                                            const VerifyConfig& config) {
  std::vector<std::vector<Value>> tuples{{}};
  for (const auto& p : m.sig.params) {
    std::vector<std::vector<Value>> next;
    for (const auto& prefix : tuples) {
      for (const auto& v : Domain(p.type, config.int_lo, config.int_hi)) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    tuples = std::move(next);
  }
  return tuples;
}

MethodReport VerifyMethod(const TraitValue& t, const MethodDecl& m,
                          const VerifyConfig& config) {
  MethodReport report;
  report.method = m.Name();
  bool inconclusive = false;
  for (const auto& inputs : InputTuples(m, config)) {
    ++report.inputs;
    bool applicable = false;
    std::vector<size_t> prefix;
    size_t runs = 0;
    for (;;) {
      Scenario scenario(t, config, m, inputs, prefix);
      Outcome outcome;
      try {
        outcome = scenario.Run();
      } catch (Failure& f) {
        ++report.scenarios;
        report.status = VerifyStatus::Fail;
        report.counterexample = std::move(f.cex);
        return report;
      }
      ++report.scenarios;
      ++runs;
      if (outcome == Outcome::Ok) applicable = true;
      if (outcome == Outcome::Vacuous) ++report.vacuous_paths;
      const auto& taken = scenario.taken();
      const auto& options = scenario.options();
      int j = static_cast<int>(taken.size()) - 1;
      while (j >= 0 && taken[j] + 1 >= options[j]) --j;
      if (j < 0) break;
      if (runs >= config.max_scenarios) {
        inconclusive = true;
        report.warnings.push_back("scenario cap reached for " + m.Name() +
                                  "(" + Render(BindingList(m, inputs)) + ")");
        break;
      }
      prefix.assign(taken.begin(), taken.begin() + j);
      prefix.push_back(taken[j] + 1);
    }
    if (applicable) ++report.applicable;
  }
  if (config.vacuity_warnings && report.vacuous_paths > 0) {
    report.warnings.push_back(std::to_string(report.vacuous_paths) +
                              " call paths had no value satisfying a contract");
  }
  if (inconclusive) {
    report.status = VerifyStatus::Inconclusive;
  } else if (report.applicable == 0) {
    report.status = VerifyStatus::Vacuous;
  }
  return report;
}

// Evaluates predicates with callee results looked up in a recorded trace;
// calls missing from the trace run their bodies.
class TraceEvaluator : public Evaluator {
 public:
  TraceEvaluator(const TraitValue& t, const std::vector<TraceEntry>& trace)
      : trait_(t) {
    for (const auto& e : trace) recorded_.emplace(CallKey(e.method, e.args), e.value);
  }

 protected:
  Value CallUnqualified(const std::string& name,
                        std::vector<Value> args) override {
    if (auto it = recorded_.find(CallKey(name, args)); it != recorded_.end()) {
      return it->second;
    }
    const MethodDecl* m = trait_.Find(name);
    if (m == nullptr || m->IsAbstract() || ++depth_ > kMaxNesting) {
      throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                         "cannot replay call to " + name);
    }
    Env env = Bind(*m, args);
    Value v = Exec(*m->body, env, name);
    --depth_;
    return v;
  }

 private:
  const TraitValue& trait_;
  std::map<std::string, Value> recorded_;
  int depth_ = 0;
};

void CollectLiterals(const Expr& e, std::vector<const expr::TraitLit*>& out) {
  Visit(e, [&](const Expr& node) {
    if (const auto* lit = node.As<expr::TraitLit>()) out.push_back(lit);
  });
}

}  // namespace

VerifyReport VerifyTrait(const TraitValue& t, const VerifyConfig& config) {
  VerifyReport report;
  RunWithLargeStack([&] {
    for (const auto& [name, m] : t.methods) {
      if (m.IsAbstract()) continue;
      report.methods.push_back(VerifyMethod(t, m, config));
    }
  });
  return report;
}

std::map<std::string, VerifyReport> VerifyProgramSources(
    const Program& p, const VerifyConfig& config) {
  std::map<std::string, VerifyReport> out;
  for (const auto& decl : p.decls) {
    const std::string& name = DeclName(decl);
    std::vector<const expr::TraitLit*> literals;
    const Expr* init = nullptr;
    if (const auto* f = std::get_if<FunDecl>(&decl)) {
      for (const auto& s : f->body) {
        Visit(*s, [&](const Expr& node) {
          if (const auto* lit = node.As<expr::TraitLit>()) literals.push_back(lit);
        });
      }
    } else {
      init = std::holds_alternative<TraitDecl>(decl)
                 ? std::get<TraitDecl>(decl).init.get()
                 : std::get<ClassDecl>(decl).init.get();
      CollectLiterals(*init, literals);
    }
    for (size_t k = 0; k < literals.size(); ++k) {
      bool whole = init != nullptr && init->As<expr::TraitLit>() == literals[k];
      std::string key = whole ? name : name + "#" + std::to_string(k + 1);
      out[key] = VerifyTrait(ToTraitValue(literals[k]->methods), config);
    }
  }
  return out;
}

std::map<std::string, VerifyReport> ReverifyFlattened(
    const MetaEnv& env, const VerifyConfig& config) {
  std::map<std::string, VerifyReport> out;
  for (const auto& [name, cls] : env.classes) {
    out[name] = VerifyTrait(cls.body, config);
  }
  return out;
}

bool ReplayCounterexample(const TraitValue& t, const Counterexample& cex,
                          const VerifyConfig& config) {
  const MethodDecl* m = t.Find(cex.method);
  if (m == nullptr || m->IsAbstract()) return false;
  std::vector<Value> inputs;
  for (const auto& [name, v] : cex.inputs) inputs.push_back(v);
  if (inputs.size() != m->Arity()) return false;

  bool reproduced = false;
  RunWithLargeStack([&] {
    Scenario scenario(t, config, *m, inputs, cex.choices);
    try {
      scenario.Run();
    } catch (const Failure& f) {
      reproduced = f.cex.kind == cex.kind &&
                   f.cex.predicate_text == cex.predicate_text &&
                   f.cex.contract_owner == cex.contract_owner;
    }
    if (!reproduced || cex.kind == FailureKind::Fault) return;
    Evaluator::Env env;
    for (const auto& [name, v] : cex.predicate_bindings) env[name] = v;
    TraceEvaluator replay(t, cex.trace);
    try {
      Value v = replay.Eval(*cex.predicate, env);
      reproduced = v.IsBool() && !v.AsBool();
    } catch (const RuntimeError&) {
      reproduced = false;
    }
  });
  return reproduced;
}

}  // namespace ctrait

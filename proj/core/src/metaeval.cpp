#include "ctrait/metaeval.h"

#include <memory>

namespace ctrait {

std::string Render(const MetaFrame& frame) {
  std::string out = frame.function + "(";
  for (size_t i = 0; i < frame.args.size(); ++i) {
    if (i) out += ", ";
    out += Render(frame.args[i]);
  }
  return out + ")";
}

const char* Code(MetaCause cause) {
  switch (cause) {
    case MetaCause::Compose: return "ComposeError";
    case MetaCause::Contract: return "ContractViolation";
    case MetaCause::EvalFault: return "EvalFault";
  }
  return "MetaError";
}

namespace {

std::string Describe(const std::string& declaration, const std::string& message,
                     const std::vector<MetaFrame>& stack) {
  std::string out = declaration + ": " + message;
  if (!stack.empty()) {
    out += " (meta stack:";
    for (const auto& f : stack) out += " " + Render(f);
    out += ")";
  }
  return out;
}

}  // namespace

MetaError::MetaError(MetaCause cause, std::string declaration,
                     std::string message, std::vector<MetaFrame> stack)
    : std::runtime_error(Describe(declaration, message, stack)),
      cause_(cause),
      declaration_(std::move(declaration)),
      message_(std::move(message)),
      stack_(std::move(stack)) {}

ClassDef MaterializeClass(const std::string& name, const TraitValue& body) {
  std::string abstract;
  for (const auto& [method, m] : body.methods) {
    if (m.IsPublic() && m.IsAbstract()) {
      abstract += (abstract.empty() ? "" : ", ") + method;
    }
  }
  if (!abstract.empty()) {
    throw MetaError(MetaCause::EvalFault, name,
                    "class " + name + " has abstract methods: " + abstract, {});
  }
  return ClassDef{name, body};
}

namespace {

class MetaEvaluator : public Evaluator {
 public:
  MetaEvaluator(MetaEnv& env, const MetaOptions& options, MetaStats* stats,
                std::string declaration)
      : env_(env),
        options_(options),
        stats_(stats),
        declaration_(std::move(declaration)) {}

  Value EvalInit(const Expr& e) {
    return Guard([&] { return Eval(e, {}); });
  }

  Value CallFunction(const std::string& name, std::vector<Value> args) {
    return Guard([&] { return CallUnqualified(name, std::move(args)); });
  }

 protected:
  Value CallUnqualified(const std::string& name,
                        std::vector<Value> args) override {
    auto it = env_.functions.find(name);
    if (it == env_.functions.end()) {
      throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                         "no function named " + name);
    }
    const FunDecl& f = it->second;
    if (args.size() != f.sig.Arity()) {
      throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                         name + " expects " + std::to_string(f.sig.Arity()) +
                             " arguments");
    }
    if (stats_) ++stats_->calls[name];
    stack_.push_back({name, args});
    Value result = Guard([&] {
      if (static_cast<int>(stack_.size()) > options_.depth_limit) {
        throw RuntimeError(RuntimeErrorKind::DepthLimit,
                           "meta recursion depth limit of " +
                               std::to_string(options_.depth_limit) +
                               " exceeded");
      }
      Env locals;
      Bindings bindings;
      for (size_t i = 0; i < args.size(); ++i) {
        locals[f.sig.params[i].name] = args[i];
        bindings.emplace_back(f.sig.params[i].name, args[i]);
      }
      for (const auto& p : f.contract.pre) {
        if (!Holds(p, locals)) {
          throw ContractViolation(name, ContractKind::Requires, p, bindings);
        }
      }
      Env frame = locals;
      Value out = Exec(f.body, frame, name);
      if (!f.contract.post.empty()) {
        locals["result"] = out;
        bindings.emplace_back("result", out);
        for (const auto& p : f.contract.post) {
          if (!Holds(p, locals)) {
            throw ContractViolation(name, ContractKind::Ensures, p, bindings);
          }
        }
      }
      return out;
    });
    stack_.pop_back();
    return result;
  }

  Value Global(const std::string& name) override {
    if (auto it = refs_.find(name); it != refs_.end()) return Value(it->second);
    auto it = env_.traits.find(name);
    if (it == env_.traits.end()) return Evaluator::Global(name);
    auto ref = std::make_shared<const TraitValue>(it->second);
    refs_.emplace(name, ref);
    return Value(ref);
  }

  Value TraitExpr(const Expr& e, const Env& env) override {
    if (const auto* x = e.As<expr::TraitLit>()) {
      return Value(std::make_shared<const TraitValue>(ToTraitValue(x->methods)));
    }
    if (const auto* x = e.As<expr::Sum>()) {
      Value lhs = Eval(*x->lhs, env);
      Value rhs = Eval(*x->rhs, env);
      return TraitSum(lhs, rhs);
    }
    const auto& adapt = std::get<expr::Adapt>(e.node);
    Value target = Eval(*adapt.target, env);
    if (!target.IsTrait()) {
      throw RuntimeError(RuntimeErrorKind::Unsupported,
                         "adaptation applied to " + Render(target));
    }
    if (const auto* r = std::get_if<RenameAdaptation>(&adapt.adaptation)) {
      if (stats_) ++stats_->renames;
      return Value(std::make_shared<const TraitValue>(
          Rename(target.AsTrait(), r->mappings)));
    }
    const auto& h = std::get<HideAdaptation>(adapt.adaptation);
    if (stats_) ++stats_->hides;
    return Value(std::make_shared<const TraitValue>(
        Hide(target.AsTrait(), h.names, &env_.warnings)));
  }

  Value TraitSum(const Value& lhs, const Value& rhs) override {
    if (!lhs.IsTrait() || !rhs.IsTrait()) {
      throw RuntimeError(RuntimeErrorKind::Unsupported,
                         "'+' on " + Render(lhs) + " and " + Render(rhs));
    }
    if (stats_) ++stats_->sums;
    return Value(
        std::make_shared<const TraitValue>(Sum(lhs.AsTrait(), rhs.AsTrait())));
  }

 private:
  bool Holds(const ExprPtr& p, const Env& env) {
    Value v = Eval(*p, env);
    return v.IsBool() && v.AsBool();
  }

  // Converts a failure to a MetaError carrying the meta stack as it was when
  // the failure was raised. Errors already converted pass through.
  template <typename F>
  Value Guard(F&& fn) {
    try {
      return fn();
    } catch (const MetaError&) {
      throw;
    } catch (const ComposeError& e) {
      MetaError error(MetaCause::Compose, declaration_, e.what(), stack_);
      error.compose = e;
      throw error;
    } catch (const ContractViolation& e) {
      MetaError error(MetaCause::Contract, declaration_, e.what(), stack_);
      error.contract = e;
      throw error;
    } catch (const RuntimeError& e) {
      throw MetaError(MetaCause::EvalFault, declaration_, e.what(), stack_);
    }
  }

  MetaEnv& env_;
  const MetaOptions& options_;
  MetaStats* stats_;
  std::string declaration_;
  std::vector<MetaFrame> stack_;
  std::map<std::string, TraitRef> refs_;
};

}  // namespace

MetaEnv EvalProgram(const Program& program, const MetaOptions& options,
                    MetaStats* stats) {
  MetaEnv env;
  RunWithLargeStack([&] {
    for (const auto& decl : program.decls) {
      env.order.push_back(DeclName(decl));
      if (const auto* f = std::get_if<FunDecl>(&decl)) {
        env.functions.emplace(f->sig.name, *f);
        continue;
      }
      const std::string& name = DeclName(decl);
      const ExprPtr& init = std::holds_alternative<TraitDecl>(decl)
                                ? std::get<TraitDecl>(decl).init
                                : std::get<ClassDecl>(decl).init;
      MetaEvaluator evaluator(env, options, stats, name);
      Value v = evaluator.EvalInit(*init);
      if (!v.IsTrait()) {
        throw MetaError(MetaCause::EvalFault, name,
                        name + " is not initialized with a trait", {});
      }
      if (std::holds_alternative<TraitDecl>(decl)) {
        env.traits.emplace(name, v.AsTrait());
      } else {
        env.classes.emplace(name, MaterializeClass(name, v.AsTrait()));
      }
    }
  });
  return env;
}

Value CallMetaFn(const MetaEnv& env, const std::string& name,
                 std::vector<Value> args, const MetaOptions& options,
                 MetaStats* stats) {
  MetaEnv scratch = env;
  Value out;
  RunWithLargeStack([&] {
    MetaEvaluator evaluator(scratch, options, stats, name);
    out = evaluator.CallFunction(name, std::move(args));
  });
  return out;
}

}  // namespace ctrait

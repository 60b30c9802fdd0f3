#include "ctrait/runtime.h"

namespace ctrait {

// Evaluates code inside one method of one class. Unqualified calls dispatch
// to siblings, private ones included.
class MethodEvaluator : public Evaluator {
 public:
  MethodEvaluator(Runtime& runtime, const ClassDef* cls, Mode mode, int depth)
      : runtime_(runtime), cls_(cls), mode_(mode), depth_(depth) {}

 protected:
  Value CallUnqualified(const std::string& name,
                        std::vector<Value> args) override {
    if (cls_ == nullptr) {
      throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                         "no function named " + name + " at run time");
    }
    const MethodDecl* m = cls_->body.Find(name);
    if (m == nullptr) {
      throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                         cls_->name + " has no method " + name);
    }
    return runtime_.Call(*cls_, *m, std::move(args), mode_, depth_ + 1);
  }

  Value CallOn(const Value& receiver, const std::string& name,
               std::vector<Value> args) override {
    if (!receiver.IsObject()) {
      return Evaluator::CallOn(receiver, name, std::move(args));
    }
    return runtime_.InvokeHere(receiver.AsObject().class_name, name,
                           std::move(args));
  }

  Value New(const std::string& class_name) override {
    runtime_.Find(class_name);
    return Value(ObjectRef{class_name});
  }

 private:
  Runtime& runtime_;
  const ClassDef* cls_;
  Mode mode_;
  int depth_;
};

Runtime::Runtime(const ClassMap& classes, RuntimeOptions options)
    : classes_(classes), options_(options) {}

const ClassDef& Runtime::Find(const std::string& class_name) const {
  auto it = classes_.find(class_name);
  if (it == classes_.end()) {
    throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                       "no class named " + class_name);
  }
  return it->second;
}

Value Runtime::Invoke(const std::string& class_name, const std::string& method,
                      std::vector<Value> args) {
  Value out;
  RunWithLargeStack([&] { out = InvokeHere(class_name, method, args); });
  return out;
}

Value Runtime::InvokeHere(const std::string& class_name,
                          const std::string& method, std::vector<Value> args) {
  const ClassDef& cls = Find(class_name);
  const MethodDecl* m = cls.body.Find(method);
  if (m == nullptr || !m->IsPublic()) {
    throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                       class_name + "." + method + ": no such public method");
  }
  if (args.size() != m->Arity()) {
    throw RuntimeError(RuntimeErrorKind::NoSuchMethod,
                       class_name + "." + method + " expects " +
                           std::to_string(m->Arity()) + " arguments");
  }
  return Call(cls, *m, std::move(args), options_.mode, 0);
}

Value Runtime::EvalExpr(const Expr& e) {
  Value out;
  RunWithLargeStack([&] {
    MethodEvaluator top(*this, nullptr, options_.mode, 0);
    out = top.Eval(e, {});
  });
  return out;
}

Value Runtime::Call(const ClassDef& cls, const MethodDecl& m,
                    std::vector<Value> args, Mode mode, int depth) {
  ++calls_;
  if (depth > options_.depth_limit) {
    throw RuntimeError(RuntimeErrorKind::DepthLimit,
                       "call depth limit exceeded in " + cls.name + "." +
                           m.Name());
  }
  if (m.IsAbstract()) {
    throw RuntimeError(RuntimeErrorKind::AbstractCall,
                       cls.name + "." + m.Name() + " is abstract");
  }
  Evaluator::Env env;
  Bindings bindings;
  for (size_t i = 0; i < m.Arity(); ++i) {
    env[m.sig.params[i].name] = args[i];
    bindings.emplace_back(m.sig.params[i].name, args[i]);
  }
  // Predicates run unchecked: a contract calling a method must not trigger
  // that method's own contract checks.
  MethodEvaluator predicates(*this, &cls, Mode::Unchecked, depth);
  auto check = [&](const ExprPtr& p, ContractKind kind, const Evaluator::Env& e,
                   const Bindings& b) {
    Value ok = predicates.Eval(*p, e);
    if (!ok.IsBool() || !ok.AsBool()) {
      throw ContractViolation(cls.name + "." + m.Name(), kind, p, b);
    }
  };
  if (mode == Mode::Checked) {
    for (const auto& p : m.contract.pre) {
      check(p, ContractKind::Requires, env, bindings);
    }
  }
  MethodEvaluator body(*this, &cls, mode, depth);
  Evaluator::Env locals = env;
  Value result = body.Exec(*m.body, locals, cls.name + "." + m.Name());
  if (mode == Mode::Checked && !m.contract.post.empty()) {
    env["result"] = result;
    bindings.emplace_back("result", result);
    for (const auto& p : m.contract.post) {
      check(p, ContractKind::Ensures, env, bindings);
    }
  }
  return result;
}

}  // namespace ctrait

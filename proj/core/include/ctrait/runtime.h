// Object-level execution of materialized classes, with optional runtime
// contract checking.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "ctrait/ast.h"
#include "ctrait/value.h"

namespace ctrait {

// A class produced by compile-time evaluation. Its public methods are all
// concrete; private methods retained by hide are callable only from inside.
struct ClassDef {
  std::string name;
  TraitValue body;
};

using ClassMap = std::map<std::string, ClassDef>;

enum class Mode { Checked, Unchecked };

struct RuntimeOptions {
  Mode mode = Mode::Checked;
  int depth_limit = 10000;
};

class Runtime {
 public:
  explicit Runtime(const ClassMap& classes, RuntimeOptions options = {});

  // Calls a public method of `class_name` from outside the class.
  Value Invoke(const std::string& class_name, const std::string& method,
               std::vector<Value> args);

  // Evaluates a closed top-level expression such as `new Pow7().pow(3)`.
  Value EvalExpr(const Expr& e);

  // Method invocations performed so far, including those made by contract
  // predicates.
  long calls() const { return calls_; }

 private:
  friend class MethodEvaluator;

  Value InvokeHere(const std::string& class_name, const std::string& method,
                   std::vector<Value> args);
  Value Call(const ClassDef& cls, const MethodDecl& m, std::vector<Value> args,
             Mode mode, int depth);
  const ClassDef& Find(const std::string& class_name) const;

  const ClassMap& classes_;
  RuntimeOptions options_;
  long calls_ = 0;
};

}  // namespace ctrait

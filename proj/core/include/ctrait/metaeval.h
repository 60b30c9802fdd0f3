// Compile-time evaluation of trait and class declarations and of the
// meta-level functions they call.

#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctrait/ast.h"
#include "ctrait/compose.h"
#include "ctrait/runtime.h"
#include "ctrait/value.h"

namespace ctrait {

struct MetaEnv {
  // Trait declarations, by name.
  std::map<std::string, TraitValue> traits;
  ClassMap classes;
  std::map<std::string, FunDecl> functions;
  // Declaration names in textual order.
  std::vector<std::string> order;
  std::vector<ComposeWarning> warnings;
};

struct MetaFrame {
  std::string function;
  std::vector<Value> args;
};

// `generate(7)`; trait arguments are abbreviated to their public names.
std::string Render(const MetaFrame& frame);

enum class MetaCause { Compose, Contract, EvalFault };

const char* Code(MetaCause cause);

class MetaError : public std::runtime_error {
 public:
  MetaError(MetaCause cause, std::string declaration, std::string message,
            std::vector<MetaFrame> stack);

  MetaCause cause() const { return cause_; }
  // The declaration whose initializer failed.
  const std::string& declaration() const { return declaration_; }
  const std::string& message() const { return message_; }
  // Outermost call first.
  const std::vector<MetaFrame>& meta_stack() const { return stack_; }

  // Set according to the cause.
  std::optional<ComposeError> compose;
  std::optional<ContractViolation> contract;

 private:
  MetaCause cause_;
  std::string declaration_;
  std::string message_;
  std::vector<MetaFrame> stack_;
};

struct MetaOptions {
  int depth_limit = 10000;
};

// Instrumentation, mainly for tests.
struct MetaStats {
  std::map<std::string, long> calls;  // per meta-function
  long sums = 0;
  long renames = 0;
  long hides = 0;
};

// Evaluates every declaration in textual order. Requires a program that
// typechecks.
MetaEnv EvalProgram(const Program& program, const MetaOptions& options = {},
                    MetaStats* stats = nullptr);

// Calls a meta-level function of `env` directly.
Value CallMetaFn(const MetaEnv& env, const std::string& name,
                 std::vector<Value> args, const MetaOptions& options = {},
                 MetaStats* stats = nullptr);

// Fails with EvalFault naming the public abstract methods if any remain.
ClassDef MaterializeClass(const std::string& name, const TraitValue& body);

}  // namespace ctrait

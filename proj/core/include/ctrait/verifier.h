// Bounded modular verification of traits.
//
// Every concrete method is run on all parameter tuples from a small domain.
// A call to a concrete method that is not already executing runs its body;
// any other call (abstract, or recursive) is replaced by its contract: a
// `result == E` postcondition is evaluated directly, otherwise every value of
// the havoc domain satisfying the postcondition is tried in turn. Within one
// scenario equal calls return equal values.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ctrait/ast.h"
#include "ctrait/metaeval.h"
#include "ctrait/value.h"

namespace ctrait {

struct VerifyConfig {
  long long int_lo = -4;
  long long int_hi = 4;
  long long havoc_lo = -16;
  long long havoc_hi = 16;
  size_t max_scenarios = 512;
  bool vacuity_warnings = true;
};

// Ordered by severity.
enum class VerifyStatus { Pass, Vacuous, Inconclusive, Fail };

const char* Code(VerifyStatus status);

struct TraceEntry {
  std::string method;
  std::vector<Value> args;
  Value value;
  // True when the value came from the callee's contract.
  bool modeled = false;
};

enum class FailureKind {
  Ensures,         // the method's own postcondition
  CalleeRequires,  // a directly invoked method's precondition
  Fault,           // a run-time error such as a negative exponent
};

const char* Code(FailureKind kind);

struct Counterexample {
  FailureKind kind = FailureKind::Ensures;
  std::string method;
  Bindings inputs;
  std::vector<TraceEntry> trace;
  // The method whose contract was violated: `method` itself or a callee.
  std::string contract_owner;
  ExprPtr predicate;
  std::string predicate_text;
  // Values under which `predicate` evaluates to false.
  Bindings predicate_bindings;
  std::string detail;
  // Havoc choices made along the failing scenario.
  std::vector<size_t> choices;
};

std::string Describe(const Counterexample& cex);

struct MethodReport {
  std::string method;
  VerifyStatus status = VerifyStatus::Pass;
  std::optional<Counterexample> counterexample;
  long inputs = 0;       // parameter tuples enumerated
  long applicable = 0;   // tuples with a scenario satisfying the precondition
  long scenarios = 0;
  long vacuous_paths = 0;
  std::vector<std::string> warnings;
};

struct VerifyReport {
  // Sorted by method name.
  std::vector<MethodReport> methods;

  VerifyStatus Overall() const;
  const MethodReport* Find(const std::string& method) const;
};

VerifyReport VerifyTrait(const TraitValue& t, const VerifyConfig& config = {});

// Verifies the trait literals written in `p`. A literal that is the whole
// initializer of a declaration is keyed by the declaration's name, any other
// by `name#k`, k counting literals within the declaration from 1.
std::map<std::string, VerifyReport> VerifyProgramSources(
    const Program& p, const VerifyConfig& config = {});

// Verifies the body of every materialized class. Only an oracle: composed
// code never needs it.
std::map<std::string, VerifyReport> ReverifyFlattened(
    const MetaEnv& env, const VerifyConfig& config = {});

// Re-runs the failing scenario and, independently, re-evaluates the violated
// predicate with callee results taken from the recorded trace. True iff both
// reproduce the violation.
bool ReplayCounterexample(const TraitValue& t, const Counterexample& cex,
                          const VerifyConfig& config = {});

}  // namespace ctrait

// Text and JSON renderings of diagnostics and verification reports.

#pragma once

#include <map>
#include <nlohmann/json.hpp>
#include <string>

#include "ctrait/compose.h"
#include "ctrait/metaeval.h"
#include "ctrait/typecheck.h"
#include "ctrait/value.h"
#include "ctrait/verifier.h"

namespace ctrait {

using Json = nlohmann::json;

// Ints become JSON numbers when they fit in 64 bits and decimal strings
// otherwise; objects become {"new": "C"}; traits list their public methods.
Json ToJson(const Value& v);
Json ToJson(const Bindings& bindings);
Json ToJson(const TypeError& error);
Json ToJson(const ComposeWarning& warning);
Json ToJson(const ContractViolation& violation);
Json ToJson(const MetaError& error);
Json ToJson(const Counterexample& cex);
Json ToJson(const MethodReport& report);
Json ToJson(const std::map<std::string, VerifyReport>& reports);

// One line per trait and one indented line per method, sorted by name.
std::string RenderText(const std::map<std::string, VerifyReport>& reports);

// Multi-line description of a MetaError, including both contracts of a
// ContractMismatch and the meta stack.
std::string RenderText(const MetaError& error);

const char* Code(ComposeWarning::Kind kind);

}  // namespace ctrait

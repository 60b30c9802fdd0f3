#include "ctrait/report.h"

#include <limits>

namespace ctrait {

const char* Code(ComposeWarning::Kind kind) {
  return kind == ComposeWarning::ContractMentionsHidden
             ? "ContractMentionsHidden"
             : "HiddenAbstractDeleted";
}

Json ToJson(const Value& v) {
  if (v.IsInt()) {
    const BigInt& i = v.AsInt();
    if (i >= std::numeric_limits<long long>::min() &&
        i <= std::numeric_limits<long long>::max()) {
      return i.convert_to<long long>();
    }
    return i.str();
  }
  if (v.IsBool()) return v.AsBool();
  if (v.IsString()) return v.AsString();
  if (v.IsObject()) return Json{{"new", v.AsObject().class_name}};
  Json methods = Json::array();
  for (const auto& [name, m] : v.AsTrait().methods) {
    if (m.IsPublic()) methods.push_back(name);
  }
  return Json{{"trait", methods}};
}

Json ToJson(const Bindings& bindings) {
  Json out = Json::object();
  for (const auto& [name, value] : bindings) out[name] = ToJson(value);
  return out;
}

namespace {

Json SpanJson(const SourceSpan& span) {
  return Json{{"file", span.file},
              {"line", span.start_line},
              {"col", span.start_col}};
}

}  // namespace

Json ToJson(const TypeError& error) {
  return Json{{"code", Code(error.kind)},
              {"message", error.message},
              {"span", SpanJson(error.span)}};
}

Json ToJson(const ComposeWarning& warning) {
  return Json{{"code", Code(warning.kind)},
              {"method", warning.method},
              {"detail", warning.detail}};
}

Json ToJson(const ContractViolation& violation) {
  return Json{{"method", violation.method()},
              {"kind", Code(violation.kind())},
              {"predicate", violation.predicate_text()},
              {"bindings", ToJson(violation.bindings())}};
}

Json ToJson(const MetaError& error) {
  Json stack = Json::array();
  for (const auto& f : error.meta_stack()) stack.push_back(Render(f));
  Json out{{"cause", Code(error.cause())},
           {"declaration", error.declaration()},
           {"message", error.message()},
           {"meta_stack", stack}};
  if (error.compose) {
    Json c{{"code", Code(error.compose->kind())},
           {"method", error.compose->method()}};
    if (!error.compose->left_contract().empty()) {
      c["left_contract"] = error.compose->left_contract();
      c["right_contract"] = error.compose->right_contract();
    }
    out["compose"] = c;
  }
  if (error.contract) out["contract"] = ToJson(*error.contract);
  return out;
}

Json ToJson(const Counterexample& cex) {
  Json trace = Json::array();
  for (const auto& t : cex.trace) {
    Json args = Json::array();
    for (const auto& a : t.args) args.push_back(ToJson(a));
    trace.push_back(Json{{"method", t.method},
                         {"args", args},
                         {"value", ToJson(t.value)},
                         {"modeled", t.modeled}});
  }
  Json out{{"kind", Code(cex.kind)},
           {"inputs", ToJson(cex.inputs)},
           {"trace", trace},
           {"choices", cex.choices}};
  if (cex.kind == FailureKind::Fault) {
    out["detail"] = cex.detail;
  } else {
    out["contract_of"] = cex.contract_owner;
    out["predicate"] = cex.predicate_text;
    out["bindings"] = ToJson(cex.predicate_bindings);
  }
  return out;
}

Json ToJson(const MethodReport& report) {
  Json out{{"method", report.method},
           {"status", Code(report.status)},
           {"inputs", report.inputs},
           {"applicable", report.applicable},
           {"scenarios", report.scenarios},
           {"warnings", report.warnings}};
  if (report.counterexample) {
    out["counterexample"] = ToJson(*report.counterexample);
  }
  return out;
}

Json ToJson(const std::map<std::string, VerifyReport>& reports) {
  Json out = Json::array();
  for (const auto& [name, report] : reports) {
    Json methods = Json::array();
    for (const auto& m : report.methods) methods.push_back(ToJson(m));
    out.push_back(Json{{"name", name},
                       {"status", Code(report.Overall())},
                       {"methods", methods}});
  }
  return out;
}

std::string RenderText(const std::map<std::string, VerifyReport>& reports) {
  std::string out;
  for (const auto& [name, report] : reports) {
    out += name + ": " + Code(report.Overall()) + "\n";
    for (const auto& m : report.methods) {
      out += "  " + m.method + ": " + Code(m.status);
      out += " (" + std::to_string(m.inputs) + " inputs, " +
             std::to_string(m.scenarios) + " scenarios)\n";
      if (m.counterexample) {
        out += "    counterexample: " + Describe(*m.counterexample) + "\n";
      }
      for (const auto& w : m.warnings) out += "    warning: " + w + "\n";
    }
  }
  return out;
}

std::string RenderText(const MetaError& error) {
  std::string out = "compile-time error in " + error.declaration() + ": " +
                    Code(error.cause()) + "\n  " + error.message() + "\n";
  if (error.compose && !error.compose->left_contract().empty()) {
    out += "  left:  " + error.compose->left_contract() + "\n";
    out += "  right: " + error.compose->right_contract() + "\n";
  }
  if (!error.meta_stack().empty()) {
    out += "  meta stack:\n";
    for (const auto& f : error.meta_stack()) out += "    " + Render(f) + "\n";
  }
  return out;
}

}  // namespace ctrait

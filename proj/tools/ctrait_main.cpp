// ctrait: check, flatten, run and re-verify trait programs.
//
// Exit codes: 0 success, 1 semantic failure (type error, failed
// verification, compile-time error, contract violation), 2 usage, parse or
// I/O error.

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <regex>
#include <set>
#include <string>
#include <vector>

#include "ctrait/corpus.h"
#include "ctrait/metaeval.h"
#include "ctrait/parser.h"
#include "ctrait/printer.h"
#include "ctrait/report.h"
#include "ctrait/runtime.h"
#include "ctrait/typecheck.h"
#include "ctrait/verifier.h"

namespace {

using ctrait::Json;

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

struct Options {
  std::vector<std::string> inputs;
  std::string int_domain;
  std::string havoc_domain;
  size_t max_scenarios = 512;
  bool json = false;
  std::string emit;
  bool checked = true;
  std::string expr;
};

// Collects the result of one command, printed once at the end either as
// text or as a single JSON object.
class Output {
 public:
  Output(const char* command, bool json) : json_(json) {
    doc_["command"] = command;
  }

  Json& doc() { return doc_; }
  bool json() const { return json_; }

  void Text(const std::string& s) {
    if (!json_) std::cout << s;
  }
  void Error(const std::string& s) {
    if (!json_) std::cerr << s << (s.empty() || s.back() != '\n' ? "\n" : "");
    doc_["errors"].push_back(s);
  }

  int Finish(int code) {
    if (json_) {
      doc_["exit_code"] = code;
      std::cout << doc_.dump(2) << "\n";
    }
    return code;
  }

 private:
  bool json_;
  Json doc_ = Json::object();
};

bool ParseRange(const std::string& text, long long& lo, long long& hi) {
  static const std::regex kRange(R"(^\s*(-?\d+)\s*\.\.\s*(-?\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, kRange)) return false;
  try {
    lo = std::stoll(m[1]);
    hi = std::stoll(m[2]);
  } catch (const std::exception&) {
    return false;
  }
  return lo <= hi;
}

std::optional<ctrait::VerifyConfig> MakeConfig(const Options& o, Output& out) {
  ctrait::VerifyConfig config;
  if (!o.int_domain.empty() &&
      !ParseRange(o.int_domain, config.int_lo, config.int_hi)) {
    out.Error("invalid --int-domain '" + o.int_domain + "', expected LO..HI");
    return std::nullopt;
  }
  if (!o.havoc_domain.empty() &&
      !ParseRange(o.havoc_domain, config.havoc_lo, config.havoc_hi)) {
    out.Error("invalid --havoc-domain '" + o.havoc_domain +
              "', expected LO..HI");
    return std::nullopt;
  }
  if (o.max_scenarios < 1) {
    out.Error("--max-scenarios must be at least 1");
    return std::nullopt;
  }
  config.max_scenarios = o.max_scenarios;
  return config;
}

// Parses and typechecks the inputs. Returns an exit code on failure.
std::optional<int> Load(const Options& o, Output& out, ctrait::Program& p) {
  try {
    p = ctrait::ParseFiles(o.inputs);
  } catch (const ctrait::ParseError& e) {
    out.Error(e.what());
    return kUsage;
  } catch (const ctrait::IoError& e) {
    out.Error(e.what());
    return kUsage;
  }
  auto errors = ctrait::CheckProgram(p);
  if (errors.empty()) return std::nullopt;
  Json list = Json::array();
  for (const auto& e : errors) {
    list.push_back(ctrait::ToJson(e));
    out.Text(ctrait::Format(e) + "\n");
  }
  out.doc()["type_errors"] = list;
  return kFailed;
}

std::optional<int> Evaluate(const ctrait::Program& p, Output& out,
                            ctrait::MetaEnv& env) {
  try {
    env = ctrait::EvalProgram(p);
  } catch (const ctrait::MetaError& e) {
    out.doc()["meta_error"] = ctrait::ToJson(e);
    if (!out.json()) std::cerr << ctrait::RenderText(e);
    return kFailed;
  }
  Json warnings = Json::array();
  std::set<std::string> seen;
  for (const auto& w : env.warnings) {
    if (!seen.insert(std::string(ctrait::Code(w.kind)) + w.method + w.detail)
             .second) {
      continue;
    }
    warnings.push_back(ctrait::ToJson(w));
    if (!out.json()) {
      std::cerr << "warning: " << ctrait::Code(w.kind) << ": " << w.method
                << ": " << w.detail << "\n";
    }
  }
  out.doc()["warnings"] = warnings;
  return std::nullopt;
}

int Report(const std::map<std::string, ctrait::VerifyReport>& reports,
           Output& out) {
  out.doc()["reports"] = ctrait::ToJson(reports);
  out.Text(ctrait::RenderText(reports));
  for (const auto& [name, r] : reports) {
    if (r.Overall() != ctrait::VerifyStatus::Pass) return kFailed;
  }
  return kOk;
}

int Check(const Options& o) {
  Output out("check", o.json);
  auto config = MakeConfig(o, out);
  if (!config) return out.Finish(kUsage);
  ctrait::Program p;
  if (auto code = Load(o, out, p)) return out.Finish(*code);
  return out.Finish(Report(ctrait::VerifyProgramSources(p, *config), out));
}

int VerifyFlat(const Options& o) {
  Output out("verify-flat", o.json);
  auto config = MakeConfig(o, out);
  if (!config) return out.Finish(kUsage);
  ctrait::Program p;
  if (auto code = Load(o, out, p)) return out.Finish(*code);
  ctrait::MetaEnv env;
  if (auto code = Evaluate(p, out, env)) return out.Finish(*code);
  return out.Finish(Report(ctrait::ReverifyFlattened(env, *config), out));
}

int Flatten(const Options& o) {
  Output out("flatten", o.json);
  ctrait::Program p;
  if (auto code = Load(o, out, p)) return out.Finish(*code);
  ctrait::MetaEnv env;
  if (auto code = Evaluate(p, out, env)) return out.Finish(*code);

  Json traits = Json::object();
  Json classes = Json::object();
  if (!o.emit.empty()) {
    const ctrait::TraitValue* body = nullptr;
    if (auto it = env.classes.find(o.emit); it != env.classes.end()) {
      body = &it->second.body;
      classes[o.emit] = ctrait::Print(*body);
    } else if (auto t = env.traits.find(o.emit); t != env.traits.end()) {
      body = &t->second;
      traits[o.emit] = ctrait::Print(*body);
    } else {
      out.Error("no class or trait named " + o.emit);
      return out.Finish(kUsage);
    }
    out.Text(ctrait::Print(*body) + "\n");
  } else {
    for (const auto& [name, t] : env.traits) {
      traits[name] = ctrait::Print(t);
      out.Text("Trait " + name + " = " + ctrait::Print(t) + "\n\n");
    }
    for (const auto& [name, c] : env.classes) {
      classes[name] = ctrait::Print(c.body);
      out.Text("class " + name + ": " + ctrait::Print(c.body) + "\n\n");
    }
  }
  out.doc()["traits"] = traits;
  out.doc()["classes"] = classes;
  return out.Finish(kOk);
}

int Run(const Options& o) {
  Output out("run", o.json);
  ctrait::Program p;
  if (auto code = Load(o, out, p)) return out.Finish(*code);
  ctrait::MetaEnv env;
  if (auto code = Evaluate(p, out, env)) return out.Finish(*code);

  ctrait::ExprPtr e;
  try {
    e = ctrait::ParseExpr(o.expr, "<-e>");
  } catch (const ctrait::ParseError& err) {
    out.Error(err.what());
    return out.Finish(kUsage);
  }
  ctrait::ClassTable table;
  for (const auto& [name, c] : env.classes) table[name] = &c.body;
  auto errors = ctrait::CheckTopLevelExpr(*e, table);
  if (!errors.empty()) {
    Json list = Json::array();
    for (const auto& err : errors) {
      list.push_back(ctrait::ToJson(err));
      out.Text(ctrait::Format(err) + "\n");
    }
    out.doc()["type_errors"] = list;
    return out.Finish(kFailed);
  }

  ctrait::RuntimeOptions options;
  options.mode = o.checked ? ctrait::Mode::Checked : ctrait::Mode::Unchecked;
  out.doc()["mode"] = o.checked ? "checked" : "unchecked";
  ctrait::Runtime runtime(env.classes, options);
  try {
    ctrait::Value v = runtime.EvalExpr(*e);
    out.doc()["value"] = ctrait::ToJson(v);
    out.doc()["rendered"] = ctrait::Render(v);
    out.Text(ctrait::Render(v) + "\n");
    return out.Finish(kOk);
  } catch (const ctrait::ContractViolation& v) {
    out.doc()["violation"] = ctrait::ToJson(v);
    out.Error(v.what());
    return out.Finish(kFailed);
  } catch (const ctrait::RuntimeError& err) {
    out.doc()["runtime_error"] =
        Json{{"code", ctrait::Code(err.kind())}, {"message", err.what()}};
    out.Error(std::string(ctrait::Code(err.kind())) + ": " + err.what());
    return out.Finish(kFailed);
  }
}

void AddCommon(CLI::App* cmd, Options& o, bool inputs_required) {
  auto* files = cmd->add_option("files", o.inputs, "Input .trait files");
  if (inputs_required) files->required();
  cmd->add_flag("--json", o.json, "Print one JSON object instead of text");
}

void AddVerifyFlags(CLI::App* cmd, Options& o) {
  cmd->add_option("--int-domain", o.int_domain,
                  "Parameter range LO..HI (default -4..4)");
  cmd->add_option("--havoc-domain", o.havoc_domain,
                  "Range for contract-modeled results LO..HI (default "
                  "-16..16)");
  cmd->add_option("--max-scenarios", o.max_scenarios,
                  "Havoc scenarios per input before giving up (default 512)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contract-carrying traits: verify, flatten and run"};
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check", "Typecheck and verify source traits");
  AddCommon(check, o, false);
  AddVerifyFlags(check, o);

  auto* flatten =
      app.add_subcommand("flatten", "Evaluate at compile time and print bodies");
  AddCommon(flatten, o, false);
  flatten->add_option("--emit", o.emit, "Print only this class or trait");

  auto* run = app.add_subcommand("run", "Evaluate an expression");
  AddCommon(run, o, false);
  run->add_option("-e,--expr", o.expr, "Expression to evaluate")->required();
  run->add_flag("--checked,!--unchecked", o.checked,
                "Check contracts on every call (default)");

  auto* verify_flat =
      app.add_subcommand("verify-flat", "Re-verify the materialized classes");
  AddCommon(verify_flat, o, false);
  AddVerifyFlags(verify_flat, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (*check) return Check(o);
  if (*flatten) return Flatten(o);
  if (*run) return Run(o);
  return VerifyFlat(o);
}

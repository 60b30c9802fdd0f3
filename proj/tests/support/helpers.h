// Small shortcuts shared by the unit and acceptance tests.

#pragma once

#include <string>
#include <vector>

#include "ctrait/corpus.h"
#include "ctrait/metaeval.h"
#include "ctrait/parser.h"
#include "ctrait/typecheck.h"

namespace ctrait::testgen {

inline std::string CorpusFile(const std::string& name) {
  return std::string(CTRAIT_CORPUS_DIR) + "/" + name;
}
inline std::string Fixture(const std::string& name) {
  return std::string(CTRAIT_FIXTURES_DIR) + "/" + name;
}

// Parses, typechecks (throwing on errors) and evaluates `source`.
inline MetaEnv Build(const std::string& source, MetaStats* stats = nullptr) {
  Program p = ParseProgram(source);
  auto errors = CheckProgram(p);
  if (!errors.empty()) throw std::runtime_error(Format(errors.front()));
  return EvalProgram(p, {}, stats);
}

inline MetaEnv BuildFiles(const std::vector<std::string>& paths,
                          MetaStats* stats = nullptr) {
  Program p = ParseFiles(paths);
  auto errors = CheckProgram(p);
  if (!errors.empty()) throw std::runtime_error(Format(errors.front()));
  return EvalProgram(p, {}, stats);
}

// A trait literal given as `class { ... }` source.
inline TraitValue TraitOf(const std::string& literal) {
  return Build("Trait t = " + literal).traits.at("t");
}

}  // namespace ctrait::testgen

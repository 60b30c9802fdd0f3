// Loading source files and the bundled example corpus.

#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctrait/ast.h"

namespace ctrait {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path);

// Parses each file on its own (so spans name the right file) and
// concatenates the declarations in argument order.
Program ParseFiles(const std::vector<std::string>& paths);

struct ExpectedFlattened {
  // A Trait or class declaration.
  std::string name;
  std::string golden_path;
  std::string golden;
  // Applied to the flattened trait before comparing, as `rename a() -> b()`.
  std::map<std::string, std::string> rename_back;
};

struct ExpectedValue {
  std::string expr;
  // Canonical rendering of the expected value.
  std::string value;
};

struct CorpusEntry {
  std::string id;
  std::string description;
  std::vector<std::string> files;  // absolute paths
  std::string source;              // concatenated file contents
  std::vector<ExpectedFlattened> expected_flattened;
  std::vector<ExpectedValue> expected_values;
  std::vector<std::string> deviations;
};

// Reads `dir`/manifest.json.
std::vector<CorpusEntry> LoadCorpus(const std::string& dir);

// The corpus directory of the source tree this library was built from.
std::string DefaultCorpusDir();

}  // namespace ctrait

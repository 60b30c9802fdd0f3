#include "ctrait/corpus.h"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "ctrait/parser.h"

namespace ctrait {

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Program ParseFiles(const std::vector<std::string>& paths) {
  Program out;
  for (const auto& path : paths) {
    Program p = ParseProgram(ReadFile(path), path);
    for (auto& d : p.decls) out.decls.push_back(std::move(d));
  }
  return out;
}

std::vector<CorpusEntry> LoadCorpus(const std::string& dir) {
  std::string manifest_path = dir + "/manifest.json";
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(ReadFile(manifest_path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError(manifest_path + ": " + e.what());
  }
  std::vector<CorpusEntry> out;
  for (const auto& j : manifest.at("entries")) {
    CorpusEntry entry;
    entry.id = j.at("id").get<std::string>();
    entry.description = j.value("description", "");
    for (const auto& f : j.at("files")) {
      entry.files.push_back(dir + "/" + f.get<std::string>());
      entry.source += ReadFile(entry.files.back());
      entry.source += "\n";
    }
    for (const auto& f : j.value("expected_flattened", nlohmann::json::array())) {
      ExpectedFlattened e;
      e.name = f.at("name").get<std::string>();
      e.golden_path = dir + "/" + f.at("golden").get<std::string>();
      e.golden = ReadFile(e.golden_path);
      if (f.contains("rename_back")) {
        e.rename_back = f.at("rename_back").get<std::map<std::string, std::string>>();
      }
      entry.expected_flattened.push_back(std::move(e));
    }
    for (const auto& v : j.value("expected_values", nlohmann::json::array())) {
      entry.expected_values.push_back(
          {v.at("expr").get<std::string>(), v.at("value").get<std::string>()});
    }
    entry.deviations =
        j.value("deviations", std::vector<std::string>{});
    out.push_back(std::move(entry));
  }
  return out;
}

std::string DefaultCorpusDir() {
#ifdef CTRAIT_CORPUS_DIR
  return CTRAIT_CORPUS_DIR;
#else
  return "corpus";
#endif
}

}  // namespace ctrait

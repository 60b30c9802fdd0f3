#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "helpers.h"

namespace ctrait {
namespace {

using testgen::CorpusFile;
using testgen::Fixture;

struct Result {
  int code = -1;
  std::string out;
};

Result Cli(const std::string& args) {
  std::string cmd = std::string(CTRAIT_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

nlohmann::json Json(const std::string& args) {
  return nlohmann::json::parse(Cli(args + " --json").out);
}

const std::string kPow = CorpusFile("30-pow.trait");

TEST(Cli, Check) {
  EXPECT_EQ(Cli("check " + kPow).code, 0);
  auto doc = Json("check " + kPow);
  EXPECT_EQ(doc["command"], "check");
  EXPECT_EQ(doc["exit_code"], 0);
  EXPECT_EQ(Cli("check " + Fixture("mutant-even-body.trait")).code, 1);
  auto bad = Json("check " + Fixture("mutant-even-body.trait"));
  bool found = false;
  for (const auto& r : bad["reports"]) {
    for (const auto& m : r["methods"]) {
      if (m["status"] == "Fail") found = found || m.contains("counterexample");
    }
  }
  EXPECT_TRUE(found) << bad.dump(2);
}

TEST(Cli, Flatten) {
  Result r = Cli("flatten " + kPow + " --emit Pow7");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, ReadFile(CorpusFile("golden/pow7.txt")));
  EXPECT_EQ(Cli("flatten " + kPow + " --emit Nope").code, 2);
  EXPECT_EQ(Cli("flatten " + Fixture("compose-mismatch.trait")).code, 1);
  auto doc = Json("flatten " + Fixture("compose-mismatch.trait"));
  EXPECT_EQ(doc["meta_error"]["compose"]["code"], "ContractMismatch") << doc.dump(2);
}

TEST(Cli, Run) {
  Result r = Cli("run " + kPow + " -e 'new Pow7().pow(3)'");
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "2187\n");
  EXPECT_EQ(Cli("run -e '1 + 1'").out, "2\n");
  std::string rec = CorpusFile("20-pow-recursive.trait");
  EXPECT_EQ(Cli("run " + rec + " -e 'new PowRec().pow(2, -1)'").code, 1);
  auto doc = Json("run " + rec + " -e 'new PowRec().pow(2, -1)'");
  EXPECT_EQ(doc["violation"]["kind"], "Requires") << doc.dump(2);
  EXPECT_EQ(Cli("run " + rec + " -e 'new PowRec().pow(2, 0)' --unchecked").code, 1);
  EXPECT_EQ(Cli("run -e '1 +'").code, 2);
  EXPECT_EQ(Cli("run -e 'new Nope().f()'").code, 1);
}

TEST(Cli, VerifyFlat) {
  EXPECT_EQ(Cli("verify-flat " + kPow).code, 0);
  EXPECT_EQ(Cli("verify-flat " + Fixture("wrong-class.trait")).code, 1);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(Cli("").code, 2);
  EXPECT_EQ(Cli("check /nonexistent.trait").code, 2);
  EXPECT_EQ(Cli("check " + kPow + " --int-domain 4..-4").code, 2);
  EXPECT_EQ(Cli("check " + kPow + " --int-domain -2..2").code, 0);
  EXPECT_EQ(Cli("frobnicate").code, 2);
  EXPECT_EQ(Cli("run " + kPow).code, 2);
}

TEST(Cli, MetaErrorJson) {
  auto doc = Json("flatten " + kPow + " " + Fixture("generate-zero.trait"));
  EXPECT_EQ(doc["exit_code"], 1);
  EXPECT_EQ(doc["meta_error"]["meta_stack"], nlohmann::json::array({"generate(0)"}))
      << doc.dump(2);
}

}  // namespace
}  // namespace ctrait

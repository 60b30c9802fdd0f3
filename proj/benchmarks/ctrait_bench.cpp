#include <benchmark/benchmark.h>

#include "ctrait/compose.h"
#include "ctrait/corpus.h"
#include "ctrait/metaeval.h"
#include "ctrait/parser.h"
#include "ctrait/runtime.h"
#include "ctrait/typecheck.h"
#include "ctrait/verifier.h"

namespace {

const std::string& PowSource() {
  static const std::string s =
      ctrait::ReadFile(std::string(CTRAIT_CORPUS_DIR) + "/30-pow.trait");
  return s;
}

const ctrait::MetaEnv& PowEnv() {
  static const ctrait::MetaEnv env =
      ctrait::EvalProgram(ctrait::ParseProgram(PowSource()));
  return env;
}

void BM_Parse(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(ctrait::ParseProgram(PowSource()));
  }
}
BENCHMARK(BM_Parse);

void BM_Typecheck(benchmark::State& state) {
  auto p = ctrait::ParseProgram(PowSource());
  for (auto _ : state) benchmark::DoNotOptimize(ctrait::CheckProgram(p));
}
BENCHMARK(BM_Typecheck);

// Compile-time specialization of pow for exponent N.
void BM_Generate(benchmark::State& state) {
  const auto& env = PowEnv();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ctrait::CallMetaFn(env, "generate", {ctrait::Value(static_cast<long long>(state.range(0)))}));
  }
}
BENCHMARK(BM_Generate)->RangeMultiplier(4)->Range(1, 1 << 12);

void BM_VerifyEven(benchmark::State& state) {
  const auto& even = PowEnv().traits.at("even");
  for (auto _ : state) benchmark::DoNotOptimize(ctrait::VerifyTrait(even));
}
BENCHMARK(BM_VerifyEven);

void BM_VerifyPowRec(benchmark::State& state) {
  auto env = ctrait::EvalProgram(ctrait::ParseProgram(ctrait::ReadFile(
      std::string(CTRAIT_CORPUS_DIR) + "/20-pow-recursive.trait")));
  const auto& t = env.traits.at("powRec");
  for (auto _ : state) benchmark::DoNotOptimize(ctrait::VerifyTrait(t));
}
BENCHMARK(BM_VerifyPowRec);

// Flattened Pow7 against the recursive version of the same computation.
void BM_RunPow7(benchmark::State& state) {
  ctrait::Runtime rt(PowEnv().classes, {ctrait::Mode::Unchecked});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rt.Invoke("Pow7", "pow", {ctrait::Value(3)}));
  }
}
BENCHMARK(BM_RunPow7);

void BM_RunPowRec7(benchmark::State& state) {
  auto env = ctrait::EvalProgram(ctrait::ParseProgram(ctrait::ReadFile(
      std::string(CTRAIT_CORPUS_DIR) + "/20-pow-recursive.trait")));
  ctrait::Runtime rt(env.classes, {ctrait::Mode::Unchecked});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        rt.Invoke("PowRec", "pow", {ctrait::Value(3), ctrait::Value(7)}));
  }
}
BENCHMARK(BM_RunPowRec7);

void BM_RunPow7Checked(benchmark::State& state) {
  ctrait::Runtime rt(PowEnv().classes, {ctrait::Mode::Checked});
  for (auto _ : state) {
    benchmark::DoNotOptimize(rt.Invoke("Pow7", "pow", {ctrait::Value(3)}));
  }
}
BENCHMARK(BM_RunPow7Checked);

}  // namespace

BENCHMARK_MAIN();

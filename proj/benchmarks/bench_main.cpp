#include <benchmark/benchmark.h>

#include <random>

#include "wrangle/assignment.hpp"
#include "wrangle/datadiff.hpp"
#include "wrangle/dialect.hpp"
#include "wrangle/eval.hpp"
#include "wrangle/pfsm.hpp"
#include "wrangle/typeinfer.hpp"

namespace {

using namespace wrangle;

void BM_Assignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  CostGrid cost(n, std::vector<double>(n));
  for (auto& row : cost)
    for (auto& c : row) c = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(cost));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Assignment)->RangeMultiplier(2)->Range(8, 128)->Complexity();

void BM_KsStatistic(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> a(n), b(n);
  for (auto& v : a) v = g(rng);
  for (auto& v : b) v = g(rng) + 0.1;
  for (auto _ : state) benchmark::DoNotOptimize(datadiff::ks_statistic(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_KsStatistic)->RangeMultiplier(4)->Range(64, 16384)->Complexity();

void BM_DialectScoring(benchmark::State& state) {
  std::string text = "name,size,colour,comment\n";
  for (int i = 0; i < state.range(0); ++i)
    text += "item" + std::to_string(i) + "," + std::to_string(i * 7 % 100) + ",\"red; blue\",\"a, b\"\n";
  const auto candidates = dialect::candidate_dialects(text);
  for (auto _ : state)
    for (const auto& d : candidates) benchmark::DoNotOptimize(dialect::score_dialect(text, d));
  state.counters["dialects"] = static_cast<double>(candidates.size());
}
BENCHMARK(BM_DialectScoring)->Arg(20)->Arg(100);

void BM_PfsmForward(benchmark::State& state) {
  const auto& machines = ptype::standard_machines();
  const std::vector<std::string> values = {"0", "12.5", "2019-04-01", "yes", "N/A", "-3", "hello world"};
  for (auto _ : state)
    for (const auto& m : machines)
      for (const auto& v : values) benchmark::DoNotOptimize(pfsm_forward(m, v));
}
BENCHMARK(BM_PfsmForward);

void BM_DatadiffBest(benchmark::State& state) {
  const auto c = eval::corrupt(eval::adult_like(300, 5), 5, eval::CorruptionMode::all);
  for (auto _ : state) {
    datadiff::BoundDatadiff bound(c.corrupted, c.clean, {});
    benchmark::DoNotOptimize(bound.best({}));
  }
}
BENCHMARK(BM_DatadiffBest)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

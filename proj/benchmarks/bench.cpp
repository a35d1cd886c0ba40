#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "msj/adversary.hpp"
#include "msj/harness.hpp"
#include "msj/oracle.hpp"
#include "msj/policies.hpp"

namespace {

using namespace msj;

// one big slot-1 backlog, pending jobs with random power-of-two needs
SystemState backlog_state(int k, int jobs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  int levels = 0;
  while ((1 << (levels + 1)) <= k) ++levels;
  Trace t{k, TraceMode::PowerOfTwo, SizeMode::Unit, {}};
  for (int i = 0; i < jobs; ++i)
    t.jobs.push_back({i, 1, 1, 1 << (rng() % (levels + 1))});
  return initial_state(t);
}

void BM_RaSelect(benchmark::State& state) {
  int jobs = static_cast<int>(state.range(0));
  SystemState s = backlog_state(256, jobs, 7);
  for (auto _ : state) benchmark::DoNotOptimize(ra_select(s, 256));
  state.SetItemsProcessed(state.iterations() * jobs);
}
BENCHMARK(BM_RaSelect)->Arg(64)->Arg(512)->Arg(4096);

void BM_SfaSelect(benchmark::State& state) {
  int jobs = static_cast<int>(state.range(0));
  SystemState s = backlog_state(256, jobs, 7);
  for (auto _ : state) benchmark::DoNotOptimize(sfa_select(s, 256));
  state.SetItemsProcessed(state.iterations() * jobs);
}
BENCHMARK(BM_SfaSelect)->Arg(64)->Arg(512)->Arg(4096);

void BM_GreedySelect(benchmark::State& state) {
  int jobs = static_cast<int>(state.range(0));
  SystemState s = backlog_state(256, jobs, 7);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_select(s, 256));
  state.SetItemsProcessed(state.iterations() * jobs);
}
BENCHMARK(BM_GreedySelect)->Arg(64)->Arg(512)->Arg(4096);

void BM_Simulate(benchmark::State& state) {
  int k = static_cast<int>(state.range(0));
  Trace t = stochastic_trace(k, 10, 200, NeedDist::uniform_pow2(), 11);
  auto policy = make_policy("ra");
  for (auto _ : state) benchmark::DoNotOptimize(simulate(t, *policy));
  state.SetItemsProcessed(state.iterations() * t.jobs.size());
}
BENCHMARK(BM_Simulate)->Arg(16)->Arg(64)->Arg(256);

void BM_ExactOptimum(benchmark::State& state) {
  int jobs = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  Trace t{8, TraceMode::PowerOfTwo, SizeMode::Unit, {}};
  for (int i = 0; i < jobs; ++i)
    t.jobs.push_back({i, 1 + static_cast<int>(rng() % 3), 1, 1 << (rng() % 4)});
  for (auto _ : state) benchmark::DoNotOptimize(opt_flow_time(t));
}
BENCHMARK(BM_ExactOptimum)->Arg(6)->Arg(9)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_AdaptiveTranscript(benchmark::State& state) {
  auto policy = make_policy("ra");
  for (auto _ : state) benchmark::DoNotOptimize(adaptive_det_lb(*policy, 32, 60, 40));
}
BENCHMARK(BM_AdaptiveTranscript)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

#include <benchmark/benchmark.h>

#include "redmon/availability.hpp"
#include "redmon/lora.hpp"
#include "redmon/network.hpp"

using namespace redmon;

static void BM_TimeOnAir(benchmark::State& state) {
  const LoraParams p;
  auto bytes = static_cast<std::uint32_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(time_on_air_ms(bytes, p));
}
BENCHMARK(BM_TimeOnAir)->Arg(10)->Arg(76);

static void BM_FailureTable(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(availability::failure_probability_table(1e-4, 20.83e-3, n));
}
BENCHMARK(BM_FailureTable)->Arg(4)->Arg(10);

static void BM_LinearSolve(benchmark::State& state) {
  availability::BirthDeathModel m;
  m.n_boards = static_cast<int>(state.range(0));
  const auto q = availability::build_generator(m);
  for (auto _ : state) benchmark::DoNotOptimize(availability::steady_state_linear_solve(q));
}
BENCHMARK(BM_LinearSolve)->Arg(4)->Arg(10)->Arg(100);

static void BM_ScenarioIteration(benchmark::State& state) {
  const ScenarioConfig cfg = expand_preset(state.range(0) ? "HF" : "baseline");
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(run_iteration(cfg, seed++));
  state.SetLabel(cfg.name);
}
BENCHMARK(BM_ScenarioIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();

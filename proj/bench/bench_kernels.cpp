// Serial reference vs OpenMP kernels: scenario fan-out and the grid oracle.

#include <benchmark/benchmark.h>

#include "moreau/suites.hpp"

namespace {

using moreau::Execution;

void fan_out(benchmark::State& state, Execution exec) {
  const auto scenarios = moreau::theorem_scenarios({5}, 4, 11);
  const moreau::ProxOptions opts;
  for (auto _ : state) {
    auto out = moreau::run_scenarios(scenarios, opts, exec);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(scenarios.size()));
}

void grid(benchmark::State& state, Execution exec) {
  const moreau::Vec target = (moreau::Vec(2) << 1.0, -0.5).finished();
  const auto objective = [&](const moreau::Vec& y) { return (y - target).squaredNorm() + y.lpNorm<1>(); };
  const moreau::GridBox box{moreau::Vec::Constant(2, -3.0), moreau::Vec::Constant(2, 3.0)};
  for (auto _ : state) {
    auto r = moreau::brute_force_min(objective, box, static_cast<int>(state.range(0)), exec);
    benchmark::DoNotOptimize(r.value);
  }
}

void BM_FanOutSerial(benchmark::State& s) { fan_out(s, Execution::serial); }
void BM_FanOutParallel(benchmark::State& s) { fan_out(s, Execution::parallel); }
void BM_GridSerial(benchmark::State& s) { grid(s, Execution::serial); }
void BM_GridParallel(benchmark::State& s) { grid(s, Execution::parallel); }

}  // namespace

BENCHMARK(BM_FanOutSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FanOutParallel)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridSerial)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GridParallel)->Arg(101)->Arg(201)->Arg(401)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

// SPDX-License-Identifier: Apache-2.0
// OpenMP K-hat against the serial O(N^2) reference, on Poisson patterns of
// growing size. Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include "ripley/estimators.hpp"
#include "ripley/samplers.hpp"

namespace {

ripley::PointPattern pattern_of(std::int64_t volume) {
  return ripley::sample_poisson(ripley::CubeWindow(2, static_cast<double>(volume)), 1.0, {42, 0});
}

void BM_EstimateK(benchmark::State& state, ripley::EdgeCorrection correction) {
  const auto pattern = pattern_of(state.range(0));
  const auto grid = ripley::RGrid::up_to(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(ripley::estimate_k(pattern, 1.0, grid, correction));
  state.counters["points"] = static_cast<double>(pattern.size());
}

void BM_BruteForceK(benchmark::State& state, ripley::EdgeCorrection correction) {
  const auto pattern = pattern_of(state.range(0));
  const auto grid = ripley::RGrid::up_to(2.0);
  for (auto _ : state) benchmark::DoNotOptimize(ripley::brute_force_k(pattern, 1.0, grid, correction));
  state.counters["points"] = static_cast<double>(pattern.size());
}

void BM_Pcf(benchmark::State& state) {
  const auto pattern = pattern_of(state.range(0));
  const ripley::RGrid grid(0.3, 0.1, 18);
  for (auto _ : state) benchmark::DoNotOptimize(ripley::estimate_pcf(pattern, 1.0, grid));
}

}  // namespace

BENCHMARK_CAPTURE(BM_EstimateK, border, ripley::EdgeCorrection::Border)
    ->Arg(400)->Arg(2500)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BruteForceK, border, ripley::EdgeCorrection::Border)
    ->Arg(400)->Arg(2500)->Arg(10000)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_EstimateK, translation, ripley::EdgeCorrection::Translation)
    ->Arg(2500)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_BruteForceK, translation, ripley::EdgeCorrection::Translation)
    ->Arg(2500)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Pcf)->Arg(2500)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();

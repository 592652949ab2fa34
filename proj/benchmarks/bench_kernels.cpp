// Copyright 2026 The FSSM Authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <vector>

#include "fssm/core.hpp"
#include "fssm/discretization.hpp"
#include "fssm/scan.hpp"
#include "fssm/selection.hpp"

namespace {

using namespace fssm;

constexpr std::size_t kChannels = 4;
constexpr std::size_t kState = 16;

ScanProblem problem_of(std::size_t T) {
  Rng rng(7);
  const auto w = init_weights(Dims::make(T, kChannels, kState), rng);
  std::vector<double> flat(T * kChannels);
  for (double& x : flat) x = rng.uniform(-1, 1);
  return make_problem(Sequence::from_flat(T, kChannels, std::move(flat)), w);
}

void BM_StepFactors(benchmark::State& state) {
  const auto method = static_cast<Method>(state.range(0));
  double z = -0.37;
  for (auto _ : state) {
    auto f = step_factors<double>(method, 0.1, z, 1.0);
    benchmark::DoNotOptimize(f);
    z = z < -8.0 ? -0.37 : z * 1.01;
  }
}
BENCHMARK(BM_StepFactors)->DenseRange(0, 3);

void BM_ScanSequential(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto method = static_cast<Method>(state.range(1));
  const auto p = problem_of(T);
  for (auto _ : state) benchmark::DoNotOptimize(scan_sequential(p, method));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T));
}
BENCHMARK(BM_ScanSequential)->ArgsProduct({{4096, 65536}, {0, 1, 2, 3}})->Unit(benchmark::kMillisecond);

void BM_ScanParallel(benchmark::State& state) {
  const auto T = static_cast<std::size_t>(state.range(0));
  const auto workers = static_cast<std::size_t>(state.range(1));
  const auto p = problem_of(T);
  for (auto _ : state) benchmark::DoNotOptimize(scan_parallel(p, Method::Fssm, {1024, workers}));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(T));
}
BENCHMARK(BM_ScanParallel)->ArgsProduct({{65536}, {1, 2, 4}})->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();

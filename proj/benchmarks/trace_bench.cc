// Copyright 2026 The hdtd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <cstdint>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "hdtd/hypothesis_tests.hpp"
#include "hdtd/matrix_core.hpp"
#include "hdtd/simulation.hpp"
#include "hdtd/trace_estimators.hpp"

namespace hdtd {
namespace {

MatrixSample Gaussian(std::size_t n, std::size_t r, std::size_t c) {
  ModelSpec spec;
  spec.n = n;
  spec.r = r;
  spec.c = c;
  spec.row_cov = CovConfig::Identity(r);
  spec.col_cov = CovConfig::Ar1(c, 0.5);
  spec.seed = 1234;
  return SampleDataset(spec);
}

void BM_T2nNaive(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MatrixSample s = Gaussian(n, 16, 16);
  for (auto _ : state) benchmark::DoNotOptimize(T2nNaive(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_T2nNaive)->RangeMultiplier(2)->Range(4, 32)->Complexity();

void BM_T2nFast(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const MatrixSample s = Gaussian(n, 16, 16);
  for (auto _ : state) benchmark::DoNotOptimize(T2nFast(s));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_T2nFast)->RangeMultiplier(2)->Range(4, 128)->Complexity();

void BM_T2nStarFast(benchmark::State& state) {
  const MatrixSample s = Gaussian(static_cast<std::size_t>(state.range(0)), 32, 50);
  for (auto _ : state) benchmark::DoNotOptimize(T2nStarFast(s));
}
BENCHMARK(BM_T2nStarFast)->Arg(20)->Arg(40)->Arg(80);

void BM_PairwiseGram(benchmark::State& state) {
  const MatrixSample s = Gaussian(80, static_cast<std::size_t>(state.range(0)), 100);
  for (auto _ : state) benchmark::DoNotOptimize(PairwiseGram(s, true));
}
BENCHMARK(BM_PairwiseGram)->Arg(32)->Arg(256);

void BM_SphericityTest(benchmark::State& state) {
  const MatrixSample s = Gaussian(static_cast<std::size_t>(state.range(0)),
                                  static_cast<std::size_t>(state.range(1)),
                                  static_cast<std::size_t>(state.range(2)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(SphericityTest(s, NullSpec::Sphericity()).statistic);
  }
}
BENCHMARK(BM_SphericityTest)
    ->Args({20, 8, 10})
    ->Args({40, 32, 50})
    ->Args({80, 256, 100})
    ->Unit(benchmark::kMillisecond);

void BM_SampleDataset(benchmark::State& state) {
  ModelSpec spec;
  spec.n = 40;
  spec.r = 64;
  spec.c = 100;
  spec.row_cov = CovConfig::Identity(64);
  spec.col_cov = CovConfig::Ar1(100, 0.85);
  spec.law = InnovationLaw::StandardizedGamma();
  const ModelSampler sampler(spec);
  std::uint64_t k = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.Draw(k++));
}
BENCHMARK(BM_SampleDataset)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace hdtd

BENCHMARK_MAIN();

// Copyright 2026 The decor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstddef>

#include "decor/basis.hpp"
#include "decor/decor.hpp"
#include "decor/rng.hpp"
#include "decor/robust.hpp"
#include "decor/sim.hpp"

namespace {

decor::SimData simulate(std::size_t n, std::uint64_t seed) {
  decor::SimConfig config = decor::SimConfig::band_limited(n);
  config.sigma_eta2 = 1.0;
  decor::Rng rng(seed);
  return decor::generate(config, rng);
}

decor::RegressionProblem frequency_problem(const decor::SimData& data) {
  auto basis = decor::cached_basis(decor::BasisKind::Cosine, data.x.rows());
  return decor::RegressionProblem(decor::transform(data.x, *basis),
                                  decor::transform(data.y, *basis));
}

void BM_BasisBuildCosine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(decor::BasisMatrix::build(decor::BasisKind::Cosine, n));
  }
}
BENCHMARK(BM_BasisBuildCosine)->RangeMultiplier(4)->Range(16, 1024);

void BM_Transform(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto basis = decor::cached_basis(decor::BasisKind::Cosine, n);
  decor::Rng rng(11);
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (auto& e : v) e = rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(decor::transform(v, *basis));
  }
}
BENCHMARK(BM_Transform)->RangeMultiplier(4)->Range(16, 1024);

void BM_Torrent(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto problem = frequency_problem(simulate(n, 12));
  const auto a = static_cast<std::size_t>(std::ceil(0.7 * static_cast<double>(n) - 1e-9));
  for (auto _ : state) {
    benchmark::DoNotOptimize(decor::torrent(problem, a));
  }
}
BENCHMARK(BM_Torrent)->RangeMultiplier(4)->Range(16, 1024);

void BM_BfsAllOfSize(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto problem = frequency_problem(simulate(n, 13));
  const auto a = static_cast<std::size_t>(std::ceil(0.7 * static_cast<double>(n) - 1e-9));
  for (auto _ : state) {
    benchmark::DoNotOptimize(decor::bfs_all_of_size(problem, a));
  }
  state.counters["subsets"] = static_cast<double>(decor::binomial(n, a));
}
BENCHMARK(BM_BfsAllOfSize)->DenseRange(8, 16, 4)->Unit(benchmark::kMillisecond);

void BM_DecorFitEndToEnd(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto data = simulate(n, 14);
  decor::DecorConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decor::decor_fit(data.x, data.y, config));
  }
}
BENCHMARK(BM_DecorFitEndToEnd)->RangeMultiplier(4)->Range(16, 1024);

}  // namespace

BENCHMARK_MAIN();

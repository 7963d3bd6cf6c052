// Copyright 2026 The cotv Authors
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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "cotv/distributions.hpp"
#include "cotv/eu_valuation.hpp"
#include "cotv/non_eu_valuation.hpp"
#include "cotv/numerics.hpp"
#include "cotv/scenario.hpp"

namespace {

void BM_IntegrateSmooth(benchmark::State& state) {
  const cotv::Tolerance tol = cotv::Tolerance::precise();
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cotv::integrate([](double t) { return std::exp(-t) * std::sqrt(t); }, 0.0, 40.0, tol));
  }
}
BENCHMARK(BM_IntegrateSmooth);

void BM_BrentRoot(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        cotv::find_root([](double t) { return std::cos(t) - t; }, 0.0, 1.0));
  }
}
BENCHMARK(BM_BrentRoot);

void BM_PremiumExact(benchmark::State& state) {
  const auto u = cotv::UtilityFunction::power(1.5);
  const auto models = std::vector<cotv::ServiceTimeModel>{
      cotv::ServiceTimeModel::exponential(1.0), cotv::ServiceTimeModel::lognormal(0.0, 0.5),
      cotv::ServiceTimeModel::gamma(0.5, 1.0)};
  const auto& m = models[static_cast<std::size_t>(state.range(0))];
  for (auto _ : state) benchmark::DoNotOptimize(cotv::premium_exact(u, m));
  state.SetLabel(m.family_name());
}
BENCHMARK(BM_PremiumExact)->DenseRange(0, 2);

void BM_DualMomentMean(benchmark::State& state) {
  const auto m = cotv::ServiceTimeModel::lognormal(0.0, 0.8);
  for (auto _ : state) benchmark::DoNotOptimize(cotv::dual_moment_mean(m));
}
BENCHMARK(BM_DualMomentMean);

void BM_DtPremiumExact(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> xi(n);
  for (std::size_t i = 0; i < n; ++i) {
    xi[i] = -1.0 + 2.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  const auto inst = cotv::build_dt_instance(5.0, xi, 0.5, 0.5);
  const cotv::DtContext ctx{cotv::WeightingFunction::inverse_s(0.61), 0.5, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(cotv::dt_premium_exact(inst, ctx));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DtPremiumExact)->RangeMultiplier(4)->Range(4, 4096)->Complexity();

void BM_MonteCarloDualMoment(benchmark::State& state) {
  const auto sampler = cotv::make_sampler(cotv::ServiceTimeModel::gamma(2.0, 1.0));
  const auto stat = cotv::statistic_max_pair_excess();
  for (auto _ : state) {
    benchmark::DoNotOptimize(cotv::mc_estimate(sampler, stat, 10000, {42, 0}));
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_MonteCarloDualMoment);

void BM_RunScenario(benchmark::State& state) {
  const cotv::ScenarioConfig c = cotv::parse_config(R"({
    "framework": "rdu",
    "distribution": {"family": "gamma", "params": {"shape": 2.0, "rate": 1.0}},
    "preference": {"family": "power", "params": {"k": 1.5}},
    "weighting": {"family": "inverse_s", "params": {"gamma": 0.7}},
    "mc_samples": 0
  })");
  for (auto _ : state) benchmark::DoNotOptimize(cotv::run_scenario(c));
}
BENCHMARK(BM_RunScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

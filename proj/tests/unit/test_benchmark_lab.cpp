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

#include <doctest.h>

#include "cotv/benchmark_lab.hpp"
#include "cotv/errors.hpp"
#include "generators.hpp"

using namespace cotv;
using cotv::testing::Gen;

TEST_CASE("lottery pair has equal means and the stated outcomes") {
  const DiscreteInstance g = DiscreteInstance::from({-0.2, 0.2}, {0.5, 0.5});
  const LotteryPair lp = build_lottery_pair(10.0, 0.1, g);
  CHECK(lp.S1.mean() == doctest::Approx(lp.S2.mean()));
  const std::vector<double> s1 = {7.2, 10.0, 10.8}, s2 = {8.0, 9.0, 12.0};
  REQUIRE(lp.S1.size() == 3);
  REQUIRE(lp.S2.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(lp.S1.outcomes[i] == doctest::Approx(s1[i]));
    CHECK(lp.S2.outcomes[i] == doctest::Approx(s2[i]));
  }
  CHECK_THROWS_AS(build_lottery_pair(10.0, 0.0, g), Error);
  CHECK_THROWS_AS(build_lottery_pair(10.0, 0.1, DiscreteInstance::from({-0.2, 0.3}, {0.5, 0.5})), Error);
}

TEST_CASE("constant-prudence choices flip at R3 = 2") {
  const DiscreteInstance g = DiscreteInstance::from({-0.1, 0.1}, {0.5, 0.5});
  for (double r3 : {0.5, 1.2, 1.5, 1.9}) {
    const auto o = rp_threshold_experiment(UtilityFunction::constant_prudence(r3, {1.0, 20.0}), 10.0, 0.05, g);
    CHECK(o.prefers == Choice::kS1);
    CHECK(o.predicted_by_r3 == Choice::kS1);
    CHECK(o.agree);
  }
  for (double r3 : {2.1, 2.5, 3.0, 4.0}) {
    const auto o = rp_threshold_experiment(UtilityFunction::constant_prudence(r3, {1.0, 20.0}), 10.0, 0.05, g);
    CHECK(o.prefers == Choice::kS2);
    CHECK(o.agree);
  }
  const auto o = rp_threshold_experiment(UtilityFunction::constant_prudence(2.0, {1.0, 20.0}), 10.0, 0.05, g);
  CHECK(o.predicted_by_r3 == Choice::kIndifferent);
  CHECK(o.prefers == Choice::kIndifferent);
}

TEST_CASE("property: small perturbations never contradict the R3 prediction") {
  cotv::testing::for_all(61, 200, [](Gen& g) {
    double r3 = g.uniform(0.3, 4.0);
    if (std::fabs(r3 - 2.0) < 0.05) r3 += 0.1;
    const UtilityFunction u = UtilityFunction::constant_prudence(r3, {1.0, 40.0});
    const double s = g.uniform(0.01, 0.2);
    const double w = g.uniform(0.2, 0.8);  // P(gamma = -s)
    const DiscreteInstance gamma = DiscreteInstance::from({-s, s * w / (1.0 - w)}, {w, 1.0 - w});
    if (gamma.outcomes.back() > 0.2) return;
    const auto o = rp_threshold_experiment(u, g.uniform(5.0, 20.0), g.uniform(0.005, 0.1), gamma);
    CHECK(o.prefers == (r3 < 2.0 ? Choice::kS1 : Choice::kS2));
  });
}

TEST_CASE("RRA trade-off sign tracks R2 against 1") {
  CHECK(rra_tradeoff_check(UtilityFunction::power(3.0), 2.0).sign == 1);
  CHECK(rra_tradeoff_check(UtilityFunction::power(1.5), 2.0).sign == -1);
  CHECK(rra_tradeoff_check(UtilityFunction::pure_quadratic(-1.0), 2.0).sign == 0);
  cotv::testing::for_all(62, 200, [](Gen& g) {
    CHECK(rra_tradeoff_check(g.risk_averse_utility(), g.uniform(0.5, 20.0)).consistent_with_r2);
  });
}

TEST_CASE("property: vertex identity holds on random models") {
  cotv::testing::for_all(63, 60, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    const double a = -g.uniform(0.1, 3.0), h = -g.uniform(0.0, 5.0), k = -g.uniform(0.0, 10.0);
    CHECK(vertex_identity_check(a, h, k, m) < 1e-10);
  });
  CHECK_THROWS_AS(vertex_identity_check(1.0, 0.0, 0.0, ServiceTimeModel::exponential(1.0)), Error);
}

TEST_CASE("bound sweep finds no violations and flags equality rows") {
  BoundSweepConfig cfg;
  for (double a : {-0.5, -2.0}) {
    for (double b : {0.0, -1.0}) cfg.pairs.push_back({a, b});
  }
  cfg.models = {{"exponential", ServiceTimeModel::exponential(1.0)},
                {"uniform", ServiceTimeModel::uniform(0.0, 2.0)}};
  const BoundSweepResult r = bound_sweep(cfg);
  CHECK(r.rows.size() == 8);
  CHECK(r.violations.empty());
  CHECK(r.max_slack_at_equality <= 1e-9);
  for (const auto& row : r.rows) {
    CHECK(row.equality_row == (row.b == 0.0));
    CHECK(row.eta == 1.0);
    CHECK(row.slack >= -1e-9);
    CHECK(row.bound == doctest::Approx(0.5 * row.cv * row.cv));
  }
}

TEST_CASE("congestion multiplier") {
  CHECK(congestion_multiplier(0.5) == 1.5);
  CHECK(congestion_multiplier(0.0) == 1.0);
  CHECK_THROWS_AS(congestion_multiplier(-0.1), Error);
}

TEST_CASE("convergence study reproduces the quadratic closed form") {
  const DiscreteInstance x = DiscreteInstance::from({-1.0, 1.0}, {0.5, 0.5});
  const auto rows =
      approximation_convergence_study(UtilityFunction::pure_quadratic(-1.0), x, {0.4, 0.2, 0.1});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].error_ratio == 0.0);
  for (const auto& r : rows) {
    const double s2 = r.sigma * r.sigma;
    CHECK(r.pi_exact == doctest::Approx(std::sqrt(1.0 + s2) - 1.0).epsilon(1e-13));
    CHECK(r.pi_approx == doctest::Approx(0.5 * s2).epsilon(1e-14));
    CHECK(r.scaled_error == doctest::Approx(r.error / s2));
  }
  CHECK(rows[1].error_ratio > 14.0);
  CHECK(rows[2].error_ratio < 18.0);
}

TEST_CASE("property: convergence errors are monotone under halving") {
  cotv::testing::for_all(64, 20, [](Gen& g) {
    const DiscreteInstance x = DiscreteInstance::from({-1.0, g.uniform(0.2, 2.0)}, {0.5, 0.5});
    // Recentre to zero mean and unit variance.
    const double m = x.mean(), sd = std::sqrt(x.variance());
    const DiscreteInstance z =
        DiscreteInstance::from({(x.outcomes[0] - m) / sd, (x.outcomes[1] - m) / sd}, x.probabilities);
    const auto rows = approximation_convergence_study(g.risk_averse_utility(), z,
                                                      {0.2, 0.1, 0.05, 0.025}, g.uniform(1.0, 5.0));
    for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].error < rows[i - 1].error);
  });
}

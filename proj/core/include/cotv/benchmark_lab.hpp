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

#ifndef COTV_BENCHMARK_LAB_HPP_
#define COTV_BENCHMARK_LAB_HPP_

#include <string>
#include <vector>

#include "cotv/distributions.hpp"
#include "cotv/preferences.hpp"

namespace cotv {

struct LotteryPair {
  double T0 = 0.0;
  double l = 0.0;
  DiscreteInstance gamma;  // zero-mean multiplicative variability
  DiscreteInstance S1;     // 1/2: T0 (1 - l)(1 + gamma), 1/2: T0
  DiscreteInstance S2;     // 1/2: T0 (1 - l), 1/2: T0 (1 + gamma)
};

LotteryPair build_lottery_pair(double T0, double l, const DiscreteInstance& gamma);

enum class Choice { kS1, kS2, kIndifferent, kMixed };

std::string to_string(Choice c);

struct ThresholdOutcome {
  Choice prefers = Choice::kIndifferent;
  Choice predicted_by_r3 = Choice::kMixed;
  bool agree = false;
  double eu_s1 = 0.0;
  double eu_s2 = 0.0;
  double r3_min = 0.0;
  double r3_max = 0.0;
};

// Brute-force expected-utility comparison of S1 against S2, with the
// prediction S2 iff min R3 >= 2 and S1 iff max R3 <= 2 over realized times.
ThresholdOutcome rp_threshold_experiment(const UtilityFunction& u, double T0,
                                         double l, const DiscreteInstance& gamma);

struct RraTradeoff {
  double second_moment_side = 0.0;  // t^2 (-u'')
  double first_moment_side = 0.0;   // t (-u')
  int sign = 0;                     // sign of the difference
  double r2 = 0.0;
  bool consistent_with_r2 = false;
};

RraTradeoff rra_tradeoff_check(const UtilityFunction& u, double t);

// |E[a (t - h)^2 + k] - (a (Var + (E t - h)^2) + k)| with the left side by
// quadrature. Requires a < 0, h <= 0, k <= 0.
double vertex_identity_check(double a, double h, double k,
                             const ServiceTimeModel& model);

struct NamedModel {
  std::string name;
  ServiceTimeModel model;
};

struct QuadraticPair {
  double a = -1.0;
  double b = 0.0;
};

struct BoundSweepConfig {
  std::vector<QuadraticPair> pairs;
  std::vector<NamedModel> models;
  double tolerance = 1e-9;
};

struct BoundSweepRow {
  std::string model;
  double a = 0.0;
  double b = 0.0;
  double cv = 0.0;
  double rho_exact = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  double eta = 1.0;
  double r2r3cv2 = 0.0;
  bool equality_row = false;
  bool violation = false;
};

struct BoundSweepResult {
  std::vector<BoundSweepRow> rows;
  std::vector<std::string> violations;
  double max_slack_at_equality = 0.0;
};

BoundSweepResult bound_sweep(const BoundSweepConfig& config);

// rho + 1. DomainError for rho < 0.
double congestion_multiplier(double rho);

struct ConvergenceRow {
  double sigma = 0.0;
  double pi_exact = 0.0;
  double pi_approx = 0.0;
  double error = 0.0;
  double scaled_error = 0.0;  // error / sigma^2
  double error_ratio = 0.0;   // previous error / this error, 0 on the first row
  double scaled_ratio = 0.0;
};

// t = mu + sigma x for a standardized instance x, over a strictly
// decreasing sigma grid.
std::vector<ConvergenceRow> approximation_convergence_study(
    const UtilityFunction& u, const DiscreteInstance& x,
    const std::vector<double>& sigma_grid, double mu = 1.0);

}  // namespace cotv

#endif  // COTV_BENCHMARK_LAB_HPP_

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

#ifndef COTV_SCENARIO_HPP_
#define COTV_SCENARIO_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotv/distributions.hpp"
#include "cotv/eu_valuation.hpp"
#include "cotv/non_eu_valuation.hpp"
#include "cotv/preferences.hpp"

namespace cotv {

inline constexpr const char* kToolName = "cotv";
inline constexpr const char* kToolVersion = "0.1.0";

using ParamList = std::vector<std::pair<std::string, double>>;

struct DistributionSpec {
  // degenerate | exponential | uniform | lognormal | gamma | shift_scaled |
  // discrete | dt_instance
  std::string family = "exponential";
  ParamList params;                  // scalar parameters, sorted by name
  std::vector<double> outcomes;      // discrete
  std::vector<double> probabilities; // discrete
  std::vector<double> xi;            // dt_instance
  std::shared_ptr<DistributionSpec> base;  // shift_scaled
};

struct PreferenceSpec {
  // quadratic | pure_quadratic | power | constant_prudence | affine
  std::string family = "pure_quadratic";
  ParamList params;
  Interval interval;
  std::optional<std::pair<double, double>> pin;  // constant_prudence (t, R2)
  double alpha = 1.0;
  double beta = 0.0;
};

struct WeightingSpec {
  std::string family = "identity";  // identity | power | inverse_s
  double gamma = 1.0;
  double p0 = 0.5;
  double psi = 0.5;
  std::optional<double> tau_h;
};

struct SweepAxis {
  std::string path;  // dotted path into the config, e.g. distribution.params.rate
  std::vector<double> values;
};

struct SweepSpec {
  std::string kind = "grid";  // grid | convergence | bound
  std::vector<SweepAxis> axes;                 // grid
  std::vector<double> sigmas;                  // convergence
  std::vector<double> x_outcomes;              // convergence
  std::vector<double> x_probabilities;         // convergence
  double mu = 1.0;                             // convergence
  std::vector<double> a_values;                // bound
  std::vector<double> b_values;                // bound
  std::vector<std::pair<std::string, DistributionSpec>> models;  // bound
};

struct ScenarioConfig {
  std::string framework = "eu";  // eu | dt | rdu
  DistributionSpec distribution;
  PreferenceSpec preference;
  std::optional<WeightingSpec> weighting;
  double phi = 1.0;
  std::string method = "both";  // exact | second_order | both
  std::uint64_t seed = 0;
  std::uint64_t mc_samples = 10000;
  std::optional<SweepSpec> sweep;
  std::string output_format = "json";
  std::string output_path;
};

// ConfigError names the offending field path.
ScenarioConfig parse_config(const std::string& text);
// Sorted-key JSON echo; parse_config(canonical_config(c)) reproduces c.
std::string canonical_config(const ScenarioConfig& config);

ServiceTimeModel build_model(const DistributionSpec& spec);
std::optional<DiscreteInstance> build_instance(const DistributionSpec& spec);
UtilityFunction build_utility(const PreferenceSpec& spec);
WeightingFunction build_weighting(const WeightingSpec& spec);

struct CrossCheck {
  std::string name;
  double value = 0.0;
};

struct ReportEnvelope {
  std::string tool = kToolName;
  std::string version = kToolVersion;
  std::string config_echo;
  std::vector<ValuationReport> reports;
  std::vector<CrossCheck> cross_checks;
  std::optional<double> wall_time_seconds;
};

ReportEnvelope run_scenario(const ScenarioConfig& config);

std::string render_json(const ReportEnvelope& envelope);
std::string render_csv(const ReportEnvelope& envelope);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline constexpr std::size_t kMaxGridPoints = 1000000;

// GridTooLarge beyond kMaxGridPoints; rows follow lexicographic axis order.
Table run_sweep(const ScenarioConfig& config);
std::string render_csv(const Table& table);
std::string render_json(const Table& table);

// Shortest round-trip decimal form, locale independent.
std::string format_number(double x);

// Moment-preference labels at the mean of the configured distribution.
std::string run_classify(const ScenarioConfig& config, const std::string& format);
// Primal and dual moments plus a seeded Monte Carlo cross-check.
std::string run_dualmoments(const ScenarioConfig& config, const std::string& format);

}  // namespace cotv

#endif  // COTV_SCENARIO_HPP_

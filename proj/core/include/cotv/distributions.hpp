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

#ifndef COTV_DISTRIBUTIONS_HPP_
#define COTV_DISTRIBUTIONS_HPP_

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cotv/numerics.hpp"

namespace cotv {

class ServiceTimeModel;

// Construction data for an n-state instance around a baseline time.
struct DtMetadata {
  double T0 = 0.0;
  double p0 = 0.5;
  double psi = 0.5;
  std::size_t n = 0;
  std::vector<double> xi;  // sorted, zero mean
};

struct DiscreteInstance {
  std::vector<double> outcomes;       // ascending, ties allowed
  std::vector<double> probabilities;  // same length, sum to 1
  std::optional<DtMetadata> dt;

  // Sorts (outcome, probability) pairs by outcome and validates.
  static DiscreteInstance from(std::vector<double> outcomes,
                               std::vector<double> probabilities);
  static DiscreteInstance equiprobable(std::vector<double> outcomes);

  // InvalidMass for negative or non-normalized probabilities,
  // DomainError for unsorted or non-finite outcomes.
  void validate() const;
  std::size_t size() const { return outcomes.size(); }
  double mean() const;
  double variance() const;
};

// Outcomes t_min (mass p0 - psi), T0 + xi_i (2 psi / n each) and t_max
// (mass 1 - p0 - psi). Zero-mass outcomes are dropped. t_min and t_max
// default to T0 + xi_1 and T0 + xi_n.
DiscreteInstance build_dt_instance(double T0, std::vector<double> xi,
                                   double p0, double psi,
                                   std::optional<double> t_min = std::nullopt,
                                   std::optional<double> t_max = std::nullopt);

struct Degenerate {
  double value = 0.0;
};
struct Exponential {
  double rate = 1.0;
};
struct Uniform {
  double a = 0.0;
  double b = 1.0;
};
struct LogNormal {
  double log_mean = 0.0;
  double log_sd = 1.0;
};
struct Gamma {
  double shape = 1.0;
  double rate = 1.0;
};
// t = shift + scale * base, scale > 0.
struct ShiftScaled {
  std::shared_ptr<const ServiceTimeModel> base;
  double shift = 0.0;
  double scale = 1.0;
};

struct Support {
  double lo = 0.0;
  double hi = 0.0;  // +inf for unbounded families
};

struct MomentSet {
  double mu = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double cv = 0.0;
  double m2_dual_mean = 0.0;
  double m2_dual_var = 0.0;
};

// A probability distortion p -> w(p), given by its value, an accurate upper
// mass q -> 1 - w(1 - q), and its derivative w'(p) evaluated from both
// p and q = 1 - p so tails keep full precision.
struct Distortion {
  std::function<double(double)> w;
  std::function<double(double)> upper_mass;
  std::function<double(double, double)> density;

  static Distortion identity();
  static Distortion square();
};

struct ExpectationDiagnostics {
  double lower = 0.0;       // lower integration limit in time units
  double truncation = 0.0;  // upper limit in time units
  int subdivisions = 0;
  long evaluations = 0;
};

class ServiceTimeModel {
 public:
  using Family = std::variant<Degenerate, Exponential, Uniform, LogNormal,
                              Gamma, ShiftScaled, DiscreteInstance>;

  static ServiceTimeModel degenerate(double value);
  static ServiceTimeModel exponential(double rate);
  static ServiceTimeModel uniform(double a, double b);
  static ServiceTimeModel lognormal(double log_mean, double log_sd);
  static ServiceTimeModel gamma(double shape, double rate);
  static ServiceTimeModel shift_scaled(const ServiceTimeModel& base,
                                       double shift, double scale);
  static ServiceTimeModel discrete(DiscreteInstance instance);

  const Family& family() const { return family_; }
  std::string family_name() const;
  bool is_discrete() const;
  bool is_degenerate() const;
  // Collapses degenerate and discrete models to an instance.
  std::optional<DiscreteInstance> as_instance() const;

  double pdf(double t) const;  // probability mass for discrete families
  double cdf(double t) const;
  double sf(double t) const;
  double quantile(double p) const;
  // Smallest t with sf(t) <= q.
  double upper_quantile(double q) const;
  double sample(RandomSource& rng) const;

  double mean() const;
  double variance() const;
  double skewness() const;
  Support support() const;

  // Upper integration limit: the relative tail of t^3 beyond it is below
  // `tail`, hence also 1 - F < tail.
  double truncation_point(double tail = kDefaultTail) const;

  static constexpr double kDefaultTail = 1e-15;

 private:
  explicit ServiceTimeModel(Family family) : family_(std::move(family)) {}
  Family family_;
};

// E[g(t)].
double expectation(const ServiceTimeModel& model, const ScalarFn& g,
                   const Tolerance& tol = Tolerance::precise(),
                   ExpectationDiagnostics* diag = nullptr);

// Stieltjes integral of g against w(F(t)). Discrete models use rank sums
// over sorted outcomes.
double distorted_expectation(const ServiceTimeModel& model, const ScalarFn& g,
                             const Distortion& d,
                             const Tolerance& tol = Tolerance::precise(),
                             ExpectationDiagnostics* diag = nullptr);

double distorted_expectation(const DiscreteInstance& instance,
                             const ScalarFn& g, const Distortion& d);

// Per-outcome decision weights w(F_i) - w(F_{i-1}).
std::vector<double> decision_weights(const DiscreteInstance& instance,
                                     const Distortion& d);

// Primal moments in closed form, dual moments by quadrature or rank sums.
// UndefinedCV when mu == 0.
MomentSet moments(const ServiceTimeModel& model);

// Integral of (t - mu) against F(t)^2, i.e. E[max(t1, t2)] - E[t].
double dual_moment_mean(const ServiceTimeModel& model,
                        const Tolerance& tol = Tolerance::precise());
// Integral of (t - mu)^2 against F(t)^2.
double dual_moment_variance(const ServiceTimeModel& model,
                            const Tolerance& tol = Tolerance::precise());

// (4 psi^2 / n^2) * sum_i xi_i * 2i. MetadataMissing without DT metadata.
double discrete_dual_moment(const DiscreteInstance& instance);
// Rank-sum companion for the squared deviations:
// (4 psi^2 / n^2) * sum_i (2i - 1) * xi_i^2.
double discrete_dual_moment_var(const DiscreteInstance& instance);

// E[max(x1, x2)] - E[x] by enumerating all ordered outcome pairs.
double brute_force_max_pair_excess(const DiscreteInstance& instance);

Sampler make_sampler(const ServiceTimeModel& model);

}  // namespace cotv

#endif  // COTV_DISTRIBUTIONS_HPP_

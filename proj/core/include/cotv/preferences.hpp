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

#ifndef COTV_PREFERENCES_HPP_
#define COTV_PREFERENCES_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotv/distributions.hpp"

namespace cotv {

struct Interval {
  double lo = 0.0;
  double hi = 1e6;
};

enum class UtilityFamily {
  kQuadratic,       // a t^2 + b t + c
  kPureQuadratic,   // a t^2 + c
  kPower,           // -t^k, k > 1
  kConstantPrudence,
  kAffine,          // -m t + c
};

std::string to_string(UtilityFamily family);

// Utility of time, non-increasing on its working interval. Every instance
// carries a positive affine transform alpha*u + beta applied on top of the
// family formula.
class UtilityFunction {
 public:
  static UtilityFunction quadratic(double a, double b, double c = 0.0,
                                   Interval interval = {});
  static UtilityFunction pure_quadratic(double a, double c = 0.0,
                                        Interval interval = {});
  static UtilityFunction power(double k, Interval interval = {});
  static UtilityFunction affine(double m = 1.0, double c = 0.0,
                                Interval interval = {});

  // u''(t) = -c t^(-r3), integrated twice. The linear constant makes
  // u'(lo) = -c lo^(1-r3) unless `pin` = (t, R2) asks for a given relative
  // risk aversion at t. DomainError when u' > 0 somewhere on the interval.
  static UtilityFunction constant_prudence(
      double r3, Interval interval, double c = 1.0,
      std::optional<std::pair<double, double>> pin = std::nullopt);

  UtilityFunction affine_transform(double alpha, double beta) const;

  double u(double t) const;
  double d1(double t) const;
  double d2(double t) const;
  double d3(double t) const;

  UtilityFamily family() const { return family_; }
  std::string family_name() const { return to_string(family_); }
  const Interval& interval() const { return interval_; }
  bool is_quadratic() const;  // includes pure quadratic and affine
  // Named parameters of the underlying family, transform excluded.
  std::vector<std::pair<std::string, double>> parameters() const;
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  // Exact coefficients where the family makes them constant or simple.
  std::optional<double> closed_form_r2(double t) const;
  std::optional<double> closed_form_r3(double t) const;

 private:
  UtilityFunction(UtilityFamily family, std::vector<double> params,
                  Interval interval);
  void validate() const;

  double raw(int order, double t) const;

  UtilityFamily family_;
  std::vector<double> params_;
  Interval interval_;
  double alpha_ = 1.0;
  double beta_ = 0.0;
};

struct RiskProfile {
  double at_time = 0.0;
  double A2 = 0.0;
  double R2 = 0.0;
  std::optional<double> A3;  // undefined when u'' = 0
  std::optional<double> R3;
  double u3 = 0.0;  // raw third derivative; its sign is convention-free
  bool risk_averse = false;
  bool prudent = false;
};

struct RiskAttitude {
  bool risk_averse = false;
  bool prudent = false;
};

// DerivativeZero when u'(t) == 0; A3 and R3 are left empty when u''(t) == 0.
RiskProfile risk_coefficients(const UtilityFunction& u, double t);

// Sign checks on a uniform grid of `grid_points` (>= 101) over the interval.
RiskAttitude classify_risk_attitude(const UtilityFunction& u,
                                    int grid_points = 101);

struct MomentPreference {
  std::string mean_vs_variance;      // variance-priority | mean-priority | indifferent
  std::string variance_vs_skewness;  // skewness-priority | variance-priority | indifferent
};

inline constexpr double kBenchmarkBand = 1e-9;

// UndefinedCoefficient when R3 is missing.
MomentPreference classify_moment_preference(const RiskProfile& profile);

enum class WeightingFamily { kIdentity, kPower, kInverseS };

std::string to_string(WeightingFamily family);

// Probability weighting w on [0, 1] with w(0) = 0, w(1) = 1, w' > 0.
class WeightingFunction {
 public:
  static WeightingFunction identity();
  static WeightingFunction power(double gamma);
  // p^g / (p^g + (1-p)^g)^(1/g).
  static WeightingFunction inverse_s(double gamma);

  double w(double p) const;
  double d1(double p) const { return d1(p, 1.0 - p); }
  double d2(double p) const { return d2(p, 1.0 - p); }
  // Derivatives with the complement q = 1 - p given exactly.
  double d1(double p, double q) const;
  double d2(double p, double q) const;
  // 1 - w(1 - q) without cancellation.
  double upper_mass(double q) const;

  WeightingFamily family() const { return family_; }
  std::string family_name() const { return to_string(family_); }
  double gamma() const { return gamma_; }
  bool is_identity() const { return family_ == WeightingFamily::kIdentity; }
  // w'' constant in p.
  bool is_quadratic() const;

  Distortion as_distortion() const;

 private:
  WeightingFunction(WeightingFamily family, double gamma);
  void validate() const;

  WeightingFamily family_;
  double gamma_ = 1.0;
};

// w''(p0) / w'(p0). DomainError unless 0 < p0 < 1.
double weighting_derivative_ratio(const WeightingFunction& w, double p0);
// Central-difference estimate of the same ratio.
double weighting_derivative_ratio_fd(const WeightingFunction& w, double p0,
                                     double h = 1e-4);

}  // namespace cotv

#endif  // COTV_PREFERENCES_HPP_

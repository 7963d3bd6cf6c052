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

#include "cotv/preferences.hpp"

#include <cmath>
#include <sstream>

#include "cotv/errors.hpp"

namespace cotv {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) raise(ErrorKind::kDomainError, what);
}

// h = u' without the linear constant, H = its antiderivative.
double cp_h(double r, double c, double t) {
  if (r == 1.0) return -c * std::log(t);
  return c * std::pow(t, 1.0 - r) / (r - 1.0);
}

double cp_H(double r, double c, double t) {
  if (r == 1.0) return -c * (t * std::log(t) - t);
  if (r == 2.0) return c * std::log(t);
  return c * std::pow(t, 2.0 - r) / ((r - 1.0) * (2.0 - r));
}

}  // namespace

std::string to_string(UtilityFamily family) {
  switch (family) {
    case UtilityFamily::kQuadratic: return "quadratic";
    case UtilityFamily::kPureQuadratic: return "pure_quadratic";
    case UtilityFamily::kPower: return "power";
    case UtilityFamily::kConstantPrudence: return "constant_prudence";
    case UtilityFamily::kAffine: return "affine";
  }
  return "unknown";
}

std::string to_string(WeightingFamily family) {
  switch (family) {
    case WeightingFamily::kIdentity: return "identity";
    case WeightingFamily::kPower: return "power";
    case WeightingFamily::kInverseS: return "inverse_s";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// UtilityFunction

UtilityFunction::UtilityFunction(UtilityFamily family,
                                 std::vector<double> params, Interval interval)
    : family_(family), params_(std::move(params)), interval_(interval) {}

UtilityFunction UtilityFunction::quadratic(double a, double b, double c,
                                           Interval interval) {
  require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c),
          "quadratic parameters must be finite");
  require(a < 0.0, "quadratic utility needs a < 0");
  require(b <= 0.0, "quadratic utility needs b <= 0");
  UtilityFunction u(UtilityFamily::kQuadratic, {a, b, c}, interval);
  u.validate();
  return u;
}

UtilityFunction UtilityFunction::pure_quadratic(double a, double c,
                                                Interval interval) {
  require(std::isfinite(a) && std::isfinite(c),
          "quadratic parameters must be finite");
  require(a < 0.0, "quadratic utility needs a < 0");
  UtilityFunction u(UtilityFamily::kPureQuadratic, {a, c}, interval);
  u.validate();
  return u;
}

UtilityFunction UtilityFunction::power(double k, Interval interval) {
  require(std::isfinite(k) && k > 1.0, "power utility needs k > 1");
  require(interval.lo >= 0.0, "power utility needs an interval on t >= 0");
  UtilityFunction u(UtilityFamily::kPower, {k}, interval);
  u.validate();
  return u;
}

UtilityFunction UtilityFunction::affine(double m, double c, Interval interval) {
  require(std::isfinite(m) && m > 0.0 && std::isfinite(c),
          "affine utility needs slope m > 0");
  UtilityFunction u(UtilityFamily::kAffine, {m, c}, interval);
  u.validate();
  return u;
}

UtilityFunction UtilityFunction::constant_prudence(
    double r3, Interval interval, double c,
    std::optional<std::pair<double, double>> pin) {
  require(std::isfinite(r3), "prudence coefficient must be finite");
  require(std::isfinite(c) && c > 0.0, "curvature scale c must be > 0");
  require(interval.lo > 0.0, "constant-prudence utility needs lo > 0");
  double slope;
  if (pin) {
    const auto [tp, r2] = *pin;
    require(tp >= interval.lo && tp <= interval.hi,
            "pin time must lie in the working interval");
    require(std::isfinite(r2) && r2 > 0.0, "pinned R2 must be > 0");
    const double target_d1 = -c * std::pow(tp, 1.0 - r3) / r2;
    slope = target_d1 - cp_h(r3, c, tp);
  } else {
    slope = -cp_h(r3, c, interval.lo) - c * std::pow(interval.lo, 1.0 - r3);
  }
  UtilityFunction u(UtilityFamily::kConstantPrudence, {r3, c, slope}, interval);
  // u'' < 0 makes u' decreasing, so u'(lo) <= 0 certifies the interval.
  if (u.d1(interval.lo) > 0.0) {
    raise(ErrorKind::kDomainError,
          "constant-prudence utility is increasing at t = " +
              fmt(interval.lo) + " for the requested constants");
  }
  u.validate();
  return u;
}

UtilityFunction UtilityFunction::affine_transform(double alpha,
                                                  double beta) const {
  require(std::isfinite(alpha) && alpha > 0.0 && std::isfinite(beta),
          "affine transform needs alpha > 0");
  UtilityFunction out = *this;
  out.alpha_ = alpha_ * alpha;
  out.beta_ = beta_ * alpha + beta;
  return out;
}

void UtilityFunction::validate() const {
  require(std::isfinite(interval_.lo) && std::isfinite(interval_.hi) &&
              interval_.lo < interval_.hi,
          "working interval needs finite lo < hi");
  const int n = 101;
  for (int i = 0; i < n; ++i) {
    const double t =
        interval_.lo + (interval_.hi - interval_.lo) * i / (n - 1.0);
    const double v = d1(t);
    if (std::isnan(v) || v > 0.0) {
      raise(ErrorKind::kDomainError,
            to_string(family_) + " utility is not non-increasing at t = " +
                fmt(t));
    }
  }
}

double UtilityFunction::raw(int order, double t) const {
  const auto& p = params_;
  switch (family_) {
    case UtilityFamily::kQuadratic:
      switch (order) {
        case 0: return (p[0] * t + p[1]) * t + p[2];
        case 1: return 2.0 * p[0] * t + p[1];
        case 2: return 2.0 * p[0];
        default: return 0.0;
      }
    case UtilityFamily::kPureQuadratic:
      switch (order) {
        case 0: return p[0] * t * t + p[1];
        case 1: return 2.0 * p[0] * t;
        case 2: return 2.0 * p[0];
        default: return 0.0;
      }
    case UtilityFamily::kPower: {
      const double k = p[0];
      double coef = -1.0;
      for (int j = 0; j < order; ++j) coef *= (k - j);
      if (coef == 0.0) return 0.0;
      return coef * std::pow(t, k - order);
    }
    case UtilityFamily::kConstantPrudence: {
      const double r = p[0], c = p[1], slope = p[2];
      switch (order) {
        case 0: return cp_H(r, c, t) + slope * t;
        case 1: return cp_h(r, c, t) + slope;
        case 2: return -c * std::pow(t, -r);
        default: return c * r * std::pow(t, -r - 1.0);
      }
    }
    case UtilityFamily::kAffine:
      switch (order) {
        case 0: return -p[0] * t + p[1];
        case 1: return -p[0];
        default: return 0.0;
      }
  }
  return 0.0;
}

double UtilityFunction::u(double t) const { return alpha_ * raw(0, t) + beta_; }
double UtilityFunction::d1(double t) const { return alpha_ * raw(1, t); }
double UtilityFunction::d2(double t) const { return alpha_ * raw(2, t); }
double UtilityFunction::d3(double t) const { return alpha_ * raw(3, t); }

bool UtilityFunction::is_quadratic() const {
  return family_ == UtilityFamily::kQuadratic ||
         family_ == UtilityFamily::kPureQuadratic ||
         family_ == UtilityFamily::kAffine ||
         (family_ == UtilityFamily::kPower && params_[0] == 2.0);
}

std::vector<std::pair<std::string, double>> UtilityFunction::parameters() const {
  const auto& p = params_;
  switch (family_) {
    case UtilityFamily::kQuadratic: return {{"a", p[0]}, {"b", p[1]}, {"c", p[2]}};
    case UtilityFamily::kPureQuadratic: return {{"a", p[0]}, {"c", p[1]}};
    case UtilityFamily::kPower: return {{"k", p[0]}};
    case UtilityFamily::kConstantPrudence:
      return {{"r3", p[0]}, {"c", p[1]}, {"slope", p[2]}};
    case UtilityFamily::kAffine: return {{"m", p[0]}, {"c", p[1]}};
  }
  return {};
}

std::optional<double> UtilityFunction::closed_form_r2(double t) const {
  const auto& p = params_;
  switch (family_) {
    case UtilityFamily::kQuadratic: {
      const double den = 2.0 * p[0] * t + p[1];
      if (den == 0.0) return std::nullopt;
      return 2.0 * p[0] * t / den;
    }
    case UtilityFamily::kPureQuadratic:
      if (t == 0.0) return std::nullopt;
      return 1.0;
    case UtilityFamily::kPower: return p[0] - 1.0;
    case UtilityFamily::kAffine: return 0.0;
    case UtilityFamily::kConstantPrudence: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<double> UtilityFunction::closed_form_r3(double) const {
  switch (family_) {
    case UtilityFamily::kQuadratic:
    case UtilityFamily::kPureQuadratic: return 0.0;
    case UtilityFamily::kPower: return 2.0 - params_[0];
    case UtilityFamily::kConstantPrudence: return params_[0];
    case UtilityFamily::kAffine: return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Coefficients and classification

RiskAttitude classify_risk_attitude(const UtilityFunction& u, int grid_points) {
  if (grid_points < 101) grid_points = 101;
  const Interval& iv = u.interval();
  RiskAttitude out{true, true};
  for (int i = 0; i < grid_points; ++i) {
    const double t = iv.lo + (iv.hi - iv.lo) * i / (grid_points - 1.0);
    const double d2 = u.d2(t);
    const double d3 = u.d3(t);
    if (std::isnan(d2) || d2 > 1e-12) out.risk_averse = false;
    if (std::isnan(d3) || d3 < -1e-12) out.prudent = false;
  }
  return out;
}

RiskProfile risk_coefficients(const UtilityFunction& u, double t) {
  const Interval& iv = u.interval();
  if (!(t >= iv.lo && t <= iv.hi)) {
    raise(ErrorKind::kDomainError,
          "t = " + fmt(t) + " lies outside the working interval");
  }
  const double d1 = u.d1(t), d2 = u.d2(t), d3 = u.d3(t);
  if (d1 == 0.0) {
    raise(ErrorKind::kDerivativeZero, "u'(" + fmt(t) + ") = 0");
  }
  RiskProfile r;
  r.at_time = t;
  r.A2 = d2 / d1;
  r.R2 = u.closed_form_r2(t).value_or(t * r.A2);
  r.u3 = d3;
  if (d2 != 0.0) {
    r.A3 = -d3 / d2;
    r.R3 = u.closed_form_r3(t).value_or(t * *r.A3);
  }
  const RiskAttitude att = classify_risk_attitude(u);
  r.risk_averse = att.risk_averse;
  r.prudent = att.prudent;
  return r;
}

MomentPreference classify_moment_preference(const RiskProfile& profile) {
  if (!std::isfinite(profile.R2)) {
    raise(ErrorKind::kUndefinedCoefficient, "R2 is not defined");
  }
  if (!profile.R3 || !std::isfinite(*profile.R3)) {
    raise(ErrorKind::kUndefinedCoefficient, "R3 is not defined");
  }
  MomentPreference out;
  const double r2 = profile.R2, r3 = *profile.R3;
  if (std::fabs(r2 - 1.0) <= kBenchmarkBand) {
    out.mean_vs_variance = "indifferent";
  } else {
    out.mean_vs_variance = r2 > 1.0 ? "variance-priority" : "mean-priority";
  }
  if (std::fabs(r3 - 2.0) <= kBenchmarkBand) {
    out.variance_vs_skewness = "indifferent";
  } else {
    out.variance_vs_skewness = r3 > 2.0 ? "skewness-priority" : "variance-priority";
  }
  return out;
}

// ---------------------------------------------------------------------------
// WeightingFunction

WeightingFunction::WeightingFunction(WeightingFamily family, double gamma)
    : family_(family), gamma_(gamma) {}

WeightingFunction WeightingFunction::identity() {
  return WeightingFunction(WeightingFamily::kIdentity, 1.0);
}

WeightingFunction WeightingFunction::power(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0, "power weighting needs gamma > 0");
  WeightingFunction w(WeightingFamily::kPower, gamma);
  w.validate();
  return w;
}

WeightingFunction WeightingFunction::inverse_s(double gamma) {
  require(std::isfinite(gamma) && gamma > 0.0,
          "inverse-S weighting needs gamma > 0");
  WeightingFunction w(WeightingFamily::kInverseS, gamma);
  w.validate();
  return w;
}

void WeightingFunction::validate() const {
  for (int i = 1; i < 1000; ++i) {
    const double p = i / 1000.0;
    const double d = d1(p);
    if (!(d > 0.0) || !std::isfinite(d)) {
      raise(ErrorKind::kDomainError,
            to_string(family_) + " weighting with gamma = " + fmt(gamma_) +
                " is not increasing at p = " + fmt(p));
    }
  }
}

bool WeightingFunction::is_quadratic() const {
  return family_ == WeightingFamily::kIdentity ||
         (family_ == WeightingFamily::kPower && (gamma_ == 1.0 || gamma_ == 2.0));
}

double WeightingFunction::w(double p) const {
  if (p <= 0.0) return 0.0;
  if (p >= 1.0) return 1.0;
  switch (family_) {
    case WeightingFamily::kIdentity: return p;
    case WeightingFamily::kPower: return std::pow(p, gamma_);
    case WeightingFamily::kInverseS: {
      const double g = gamma_;
      const double pg = std::pow(p, g);
      return pg / std::pow(pg + std::pow(1.0 - p, g), 1.0 / g);
    }
  }
  return p;
}

double WeightingFunction::upper_mass(double q) const {
  if (q <= 0.0) return 0.0;
  if (q >= 1.0) return 1.0;
  switch (family_) {
    case WeightingFamily::kIdentity: return q;
    case WeightingFamily::kPower: return -std::expm1(gamma_ * std::log1p(-q));
    case WeightingFamily::kInverseS: {
      const double g = gamma_;
      // w(1 - q) = (1 - q)^(g - 1) (1 + (q / (1 - q))^g)^(-1 / g)
      const double ratio = std::pow(q / (1.0 - q), g);
      return -std::expm1((g - 1.0) * std::log1p(-q) - std::log1p(ratio) / g);
    }
  }
  return q;
}

double WeightingFunction::d1(double p, double q) const {
  switch (family_) {
    case WeightingFamily::kIdentity: return 1.0;
    case WeightingFamily::kPower:
      if (gamma_ == 1.0) return 1.0;
      return gamma_ * std::pow(p, gamma_ - 1.0);
    case WeightingFamily::kInverseS: {
      const double g = gamma_;
      const double pg = std::pow(p, g), qg = std::pow(q, g);
      const double D = pg + qg;
      const double w = pg / std::pow(D, 1.0 / g);
      const double L1 = g / p - (pg / p - qg / q) / D;
      return w * L1;
    }
  }
  return 1.0;
}

double WeightingFunction::d2(double p, double q) const {
  switch (family_) {
    case WeightingFamily::kIdentity: return 0.0;
    case WeightingFamily::kPower: {
      const double g = gamma_;
      const double coef = g * (g - 1.0);
      if (coef == 0.0) return 0.0;
      if (g == 2.0) return 2.0;
      return coef * std::pow(p, g - 2.0);
    }
    case WeightingFamily::kInverseS: {
      // w = exp(L), L = g ln p - ln(D) / g, D = p^g + q^g.
      const double g = gamma_;
      const double pg = std::pow(p, g), qg = std::pow(q, g);
      const double D = pg + qg;
      const double w = pg / std::pow(D, 1.0 / g);
      const double E = pg / p - qg / q;              // D' / g
      const double dE = (g - 1.0) * (pg / (p * p) + qg / (q * q));
      const double L1 = g / p - E / D;
      const double L2 = -g / (p * p) - (dE * D - g * E * E) / (D * D);
      return w * (L1 * L1 + L2);
    }
  }
  return 0.0;
}

Distortion WeightingFunction::as_distortion() const {
  const WeightingFunction self = *this;
  return {[self](double p) { return self.w(p); },
          [self](double q) { return self.upper_mass(q); },
          [self](double p, double q) { return self.d1(p, q); }};
}

double weighting_derivative_ratio(const WeightingFunction& w, double p0) {
  if (!(p0 > 0.0 && p0 < 1.0)) {
    raise(ErrorKind::kDomainError, "p0 must lie strictly inside (0, 1)");
  }
  const double d1 = w.d1(p0);
  if (d1 == 0.0) raise(ErrorKind::kDerivativeZero, "w'(p0) = 0");
  return w.d2(p0) / d1;
}

double weighting_derivative_ratio_fd(const WeightingFunction& w, double p0,
                                     double h) {
  if (!(p0 - h > 0.0 && p0 + h < 1.0)) {
    raise(ErrorKind::kDomainError, "finite-difference stencil leaves (0, 1)");
  }
  const double wp = w.w(p0 + h), w0 = w.w(p0), wm = w.w(p0 - h);
  const double d1 = (wp - wm) / (2.0 * h);
  const double d2 = (wp - 2.0 * w0 + wm) / (h * h);
  return d2 / d1;
}

}  // namespace cotv

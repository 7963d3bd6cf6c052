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

#include "cotv/eu_valuation.hpp"

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

void check_support(const UtilityFunction& u, const ServiceTimeModel& model) {
  const Interval& iv = u.interval();
  const double lo = model.support().lo;
  const double hi = model.truncation_point();
  if (lo < iv.lo || hi > iv.hi) {
    raise(ErrorKind::kDomainError,
          "model support [" + fmt(lo) + ", " + fmt(hi) +
              "] leaves the utility interval [" + fmt(iv.lo) + ", " +
              fmt(iv.hi) + "]");
  }
}

void record(Diagnostics* diag, const ExpectationDiagnostics& ed) {
  if (!diag) return;
  diag->lower = ed.lower;
  diag->truncation = ed.truncation;
  diag->quadrature_subdivisions += ed.subdivisions;
  diag->quadrature_evaluations += ed.evaluations;
}

double r2_at(const UtilityFunction& u, double mu) {
  const double d1 = u.d1(mu);
  if (d1 == 0.0) raise(ErrorKind::kDerivativeZero, "u'(mu) = 0");
  return u.closed_form_r2(mu).value_or(mu * u.d2(mu) / d1);
}

}  // namespace

std::string to_string(Method method) {
  return method == Method::kExact ? "exact" : "second_order";
}

void EconomicContext::validate() const {
  if (!(std::isfinite(phi) && phi > 0.0)) {
    raise(ErrorKind::kDomainError, "phi must be finite and > 0");
  }
}

Tolerance premium_root_tolerance() { return {1e-15, 1e-13, 500}; }

double premium_exact(const UtilityFunction& u, const ServiceTimeModel& model,
                     Diagnostics* diag) {
  if (model.is_degenerate() || u.family() == UtilityFamily::kAffine) return 0.0;
  check_support(u, model);
  ExpectationDiagnostics ed;
  const double eu = expectation(
      model, [&](double t) { return u.u(t); }, Tolerance::precise(), &ed);
  record(diag, ed);
  const double mu = model.mean();
  const Interval& iv = u.interval();
  const double hi = std::max(model.truncation_point() - mu, 1e-12);
  const RootResult r = find_root_expanding(
      [&](double pi) { return u.u(mu + pi) - eu; }, 0.0, hi, iv.lo - mu,
      iv.hi - mu, premium_root_tolerance());
  if (diag) {
    diag->root_iterations = r.iterations;
    diag->root_residual = r.residual;
  }
  return r.root;
}

double premium_approx(const UtilityFunction& u, const ServiceTimeModel& model) {
  if (model.is_degenerate()) return 0.0;
  const double mu = model.mean();
  const double d1 = u.d1(mu);
  if (d1 == 0.0) raise(ErrorKind::kDerivativeZero, "u'(mu) = 0");
  return 0.5 * model.variance() * u.d2(mu) / d1;
}

double vot_at(const UtilityFunction& u, double T, const EconomicContext& ctx) {
  ctx.validate();
  return -u.d1(T) / ctx.phi;
}

double vot_mean(const UtilityFunction& u, const ServiceTimeModel& model,
                const EconomicContext& ctx, Diagnostics* diag) {
  ctx.validate();
  const double mu = model.mean();
  if (model.is_degenerate()) return vot_at(u, mu, ctx);
  if (ctx.method == Method::kSecondOrder) {
    return vot_at(u, mu, ctx) - 0.5 * model.variance() * u.d3(mu) / ctx.phi;
  }
  check_support(u, model);
  ExpectationDiagnostics ed;
  const double e = expectation(
      model, [&](double t) { return -u.d1(t); }, Tolerance::precise(), &ed);
  record(diag, ed);
  return e / ctx.phi;
}

double cot(const UtilityFunction& u, const ServiceTimeModel& model,
           const EconomicContext& ctx) {
  return vot_mean(u, model, ctx) * model.mean();
}

double cotv(const UtilityFunction& u, const ServiceTimeModel& model,
            const EconomicContext& ctx, Diagnostics* diag) {
  ctx.validate();
  if (model.is_degenerate()) return 0.0;
  const double mu = model.mean();
  if (ctx.method == Method::kSecondOrder) {
    return premium_approx(u, model) * vot_at(u, mu, ctx);
  }
  if (u.family() == UtilityFamily::kAffine) return 0.0;
  check_support(u, model);
  const double u_mu = u.u(mu);
  ExpectationDiagnostics ed;
  const double e = expectation(
      model, [&](double t) { return u_mu - u.u(t); }, Tolerance::precise(), &ed);
  record(diag, ed);
  return e / ctx.phi;
}

double prudence_term(const UtilityFunction& u, const ServiceTimeModel& model) {
  if (model.is_degenerate()) return 0.0;
  const double mu = model.mean();
  const double d1 = u.d1(mu);
  if (d1 == 0.0) raise(ErrorKind::kDerivativeZero, "u'(mu) = 0");
  const double d3 = u.d3(mu);
  if (d3 == 0.0) return 0.0;
  return -model.variance() * d3 / d1;
}

double ratio_rho(const UtilityFunction& u, const ServiceTimeModel& model,
                 const EconomicContext& ctx) {
  ctx.validate();
  const double mu = model.mean();
  if (ctx.method == Method::kSecondOrder) {
    if (mu <= 0.0) raise(ErrorKind::kZeroCOT, "mean time is zero");
    if (model.is_degenerate()) return 0.0;
    const double cv2 = model.variance() / (mu * mu);
    const double den = 2.0 + prudence_term(u, model);
    if (den == 0.0) raise(ErrorKind::kDomainError, "2 + R2 R3 CV^2 = 0");
    return r2_at(u, mu) * cv2 / den;
  }
  const double c = cot(u, model, ctx);
  if (c == 0.0) raise(ErrorKind::kZeroCOT, "cost of time is zero");
  if (model.is_degenerate()) return 0.0;
  return cotv(u, model, ctx) / c;
}

double ratio_rho_premium_form(const UtilityFunction& u,
                              const ServiceTimeModel& model) {
  const double mu = model.mean();
  if (mu <= 0.0) raise(ErrorKind::kZeroCOT, "mean time is zero");
  if (model.is_degenerate()) return 0.0;
  const double d1 = u.d1(mu);
  if (d1 == 0.0) raise(ErrorKind::kDerivativeZero, "u'(mu) = 0");
  const double den = 1.0 - 0.5 * model.variance() * u.d3(mu) / d1;
  if (den == 0.0) raise(ErrorKind::kDomainError, "premium-form denominator is zero");
  return premium_approx(u, model) / mu / den;
}

double eta_from_term(double r2r3cv2) {
  const double den = 1.0 + 0.5 * r2r3cv2;
  if (den == 0.0) raise(ErrorKind::kDomainError, "1 + R2 R3 CV^2 / 2 = 0");
  return 1.0 / den;
}

double eta_from_coefficients(double r2, double r3, double cv) {
  return eta_from_term(r2 * r3 * cv * cv);
}

double ratio_eta(const UtilityFunction& u, const ServiceTimeModel& model) {
  if (model.is_degenerate()) return 1.0;
  return eta_from_term(prudence_term(u, model));
}

double ratio_eta_exact(const UtilityFunction& u, const ServiceTimeModel& model) {
  if (model.is_degenerate()) return 1.0;
  const EconomicContext unit{1.0, Method::kExact};
  const double v = vot_mean(u, model, unit);
  if (v == 0.0) raise(ErrorKind::kDerivativeZero, "mean VOT is zero");
  return vot_at(u, model.mean(), unit) / v;
}

RhoBound rho_upper_bound(const UtilityFunction& u,
                         const ServiceTimeModel& model) {
  if (!u.is_quadratic()) {
    raise(ErrorKind::kNotQuadratic,
          "rho bound applies to quadratic utilities, got " + u.family_name());
  }
  const double mu = model.mean();
  if (mu == 0.0) raise(ErrorKind::kUndefinedCV, "mean is zero");
  RhoBound b;
  b.bound = 0.5 * model.variance() / (mu * mu);
  if (std::holds_alternative<Exponential>(model.family())) b.poisson_bound = 0.5;
  return b;
}

ValuationReport evaluate_eu(const UtilityFunction& u,
                            const ServiceTimeModel& model,
                            const EconomicContext& ctx) {
  ctx.validate();
  ValuationReport r;
  r.framework = "eu";
  r.method = ctx.method;
  r.mu = model.mean();
  if (r.mu <= 0.0) raise(ErrorKind::kZeroCOT, "mean time is zero");
  r.cv = std::sqrt(model.variance()) / r.mu;
  const bool degenerate = model.is_degenerate();
  r.vot_at_mu = vot_at(u, r.mu, ctx);
  Diagnostics& d = r.diagnostics;
  d.truncation = model.truncation_point();
  d.lower = model.support().lo;

  if (ctx.method == Method::kExact) {
    r.pi = premium_exact(u, model, &d);
    r.vot = vot_mean(u, model, ctx, &d);
    r.cot = r.vot * r.mu;
    if (r.cot == 0.0) raise(ErrorKind::kZeroCOT, "cost of time is zero");
    r.cotv = cotv(u, model, ctx, &d);
    r.rho = degenerate ? 0.0 : r.cotv / r.cot;
    r.eta = degenerate ? 1.0 : r.vot_at_mu / r.vot;
  } else {
    r.pi = premium_approx(u, model);
    r.vot = vot_mean(u, model, ctx);
    r.cot = r.vot * r.mu;
    if (r.cot == 0.0) raise(ErrorKind::kZeroCOT, "cost of time is zero");
    r.cotv = r.pi * r.vot_at_mu;
    r.rho = ratio_rho(u, model, ctx);
    r.eta = ratio_eta(u, model);
    r.rho_from_components = degenerate ? 0.0 : r.cotv / r.cot;
    d.values.emplace_back("r2r3cv2", prudence_term(u, model));
  }
  if (u.is_quadratic()) r.rho_upper_bound = rho_upper_bound(u, model).bound;
  r.congestion_multiplier = 1.0 + r.rho;
  return r;
}

}  // namespace cotv

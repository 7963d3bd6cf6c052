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

#include "cotv/non_eu_valuation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "cotv/errors.hpp"

namespace cotv {

namespace {

constexpr double kMetaTol = 1e-12;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

const DtMetadata& require_dt(const DiscreteInstance& instance) {
  if (!instance.dt) {
    raise(ErrorKind::kMetadataMissing, "instance carries no DT metadata");
  }
  return *instance.dt;
}

void check_match(const DtMetadata& md, double p0, double psi) {
  if (std::fabs(md.p0 - p0) > kMetaTol || std::fabs(md.psi - psi) > kMetaTol) {
    raise(ErrorKind::kMetadataMismatch,
          "instance built with (p0, psi) = (" + fmt(md.p0) + ", " +
              fmt(md.psi) + "), context has (" + fmt(p0) + ", " + fmt(psi) +
              ")");
  }
}

void require_full_span(double psi, const char* what) {
  if (std::fabs(2.0 * psi - 1.0) > kMetaTol) {
    raise(ErrorKind::kDomainError,
          std::string(what) + " is defined for 2 psi = 1 only");
  }
}

// Band decision weights and their total D = w(p0 + psi) - w(p0 - psi).
struct Band {
  std::vector<double> dw;
  double total = 0.0;
};

Band band_weights(const WeightingFunction& w, double p0, double psi,
                  std::size_t n) {
  Band b;
  b.dw.resize(n);
  const double lo = p0 - psi;
  const double hi = p0 + psi;
  const double step = 2.0 * psi / static_cast<double>(n);
  double prev = w.w(lo);
  const double first = prev;
  for (std::size_t i = 1; i <= n; ++i) {
    const double p = (i == n) ? hi : lo + static_cast<double>(i) * step;
    const double cur = w.w(p);
    b.dw[i - 1] = cur - prev;
    prev = cur;
  }
  b.total = prev - first;
  return b;
}

double band_average(const Band& b, const std::vector<double>& values) {
  double s = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) s += b.dw[i] * values[i];
  return s / b.total;
}

void check_interval(const UtilityFunction& u, double lo, double hi) {
  const Interval& iv = u.interval();
  if (lo < iv.lo || hi > iv.hi) {
    raise(ErrorKind::kDomainError,
          "times [" + fmt(lo) + ", " + fmt(hi) +
              "] leave the utility interval [" + fmt(iv.lo) + ", " +
              fmt(iv.hi) + "]");
  }
}

double solve_certainty_equivalent(const UtilityFunction& u, double mu,
                                  double target, double lo, double hi,
                                  Diagnostics* diag) {
  const Interval& iv = u.interval();
  const RootResult r = find_root_expanding(
      [&](double pi) { return u.u(mu + pi) - target; }, lo, hi, iv.lo - mu,
      iv.hi - mu, premium_root_tolerance());
  if (diag) {
    diag->root_iterations = r.iterations;
    diag->root_residual = r.residual;
  }
  return r.root;
}

double cv_of(double mu, double m2) { return mu > 0.0 ? std::sqrt(m2) / mu : 0.0; }

}  // namespace

void DtContext::validate() const {
  if (!(p0 > 0.0 && p0 < 1.0)) {
    raise(ErrorKind::kDomainError, "p0 must lie strictly inside (0, 1)");
  }
  if (!(psi > 0.0) || psi > std::min(p0, 1.0 - p0) + kMetaTol) {
    raise(ErrorKind::kDomainError, "psi must satisfy 0 < psi <= min(p0, 1 - p0)");
  }
}

bool DtContext::spans_all_probability() const {
  return std::fabs(2.0 * psi - 1.0) <= kMetaTol;
}

void RduContext::validate() const {
  dt().validate();
  if (tau_h && !(std::isfinite(*tau_h) && *tau_h > 0.0)) {
    raise(ErrorKind::kDomainError, "tau_h override must be > 0");
  }
}

InstanceMoments instance_moments(const DiscreteInstance& instance) {
  const DtMetadata& md = require_dt(instance);
  InstanceMoments m;
  m.mu = md.T0;
  double s = 0.0;
  for (double x : md.xi) s += x * x;
  m.m2 = s / static_cast<double>(md.n);
  m.m2_dual = discrete_dual_moment(instance);
  m.m2_dual_var = discrete_dual_moment_var(instance);
  return m;
}

InstanceMoments model_moments(const ServiceTimeModel& model) {
  InstanceMoments m;
  m.mu = model.mean();
  m.m2 = model.variance();
  m.m2_dual = dual_moment_mean(model);
  m.m2_dual_var = dual_moment_variance(model);
  return m;
}

// ---------------------------------------------------------------------------
// Dual theory

double dt_expected_utility(const ServiceTimeModel& model,
                           const WeightingFunction& w) {
  return distorted_expectation(
      model, [](double t) { return -t; }, w.as_distortion());
}

double dt_expected_utility(const DiscreteInstance& instance,
                           const WeightingFunction& w) {
  return distorted_expectation(
      instance, [](double t) { return -t; }, w.as_distortion());
}

double dt_premium_exact(const DiscreteInstance& instance, const DtContext& ctx) {
  ctx.validate();
  const DtMetadata& md = require_dt(instance);
  check_match(md, ctx.p0, ctx.psi);
  const Band b = band_weights(ctx.w, ctx.p0, ctx.psi, md.n);
  return band_average(b, md.xi);
}

double dt_premium_exact(const ServiceTimeModel& model, const DtContext& ctx) {
  ctx.validate();
  require_full_span(ctx.psi, "continuous DT premium");
  if (model.is_degenerate()) return 0.0;
  return weighted_mean(model, ctx.w) - model.mean();
}

double dt_premium_approx(const DtContext& ctx, double m2_dual) {
  ctx.validate();
  require_full_span(ctx.psi, "approximate DT premium");
  if (m2_dual == 0.0) return 0.0;
  return 0.5 * weighting_derivative_ratio(ctx.w, ctx.p0) * m2_dual;
}

double dt_ratio(const DtContext& ctx, double mu, double m2_dual) {
  if (!(mu > 0.0)) raise(ErrorKind::kZeroCOT, "mean time is zero");
  const double dual_rra = mu * weighting_derivative_ratio(ctx.w, ctx.p0);
  return 0.5 * (m2_dual / (mu * mu)) * dual_rra;
}

namespace {

ValuationReport dt_report(double mu, double m2, double m2_dual,
                          double pi_exact_or_nan, const DtContext& ctx,
                          double phi, Method method) {
  if (!(std::isfinite(phi) && phi > 0.0)) {
    raise(ErrorKind::kDomainError, "phi must be finite and > 0");
  }
  if (!(mu > 0.0)) raise(ErrorKind::kZeroCOT, "mean time is zero");
  ValuationReport r;
  r.framework = "dt";
  r.method = method;
  r.mu = mu;
  r.cv = cv_of(mu, m2);
  r.vot_at_mu = 1.0 / phi;
  r.vot = 1.0 / phi;
  r.cot = mu / phi;
  r.eta = 1.0;
  if (method == Method::kExact) {
    r.pi = pi_exact_or_nan;
    r.rho = r.pi / mu;
  } else {
    r.pi = dt_premium_approx(ctx, m2_dual);
    r.rho = dt_ratio(ctx, mu, m2_dual);
    r.rho_from_components = r.pi / mu;
  }
  r.cotv = r.pi / phi;
  r.congestion_multiplier = 1.0 + r.rho;
  Diagnostics& d = r.diagnostics;
  d.values.emplace_back("m2_dual", m2_dual);
  d.values.emplace_back("dual_rra", mu * weighting_derivative_ratio(ctx.w, ctx.p0));
  d.values.emplace_back("dual_risk_averse_time_domain", r.pi >= 0.0 ? 1.0 : 0.0);
  d.notes.emplace_back("vot_convention", "VOT = 1/phi > 0 under linear utility");
  return r;
}

}  // namespace

ValuationReport dt_valuation(const DiscreteInstance& instance,
                             const DtContext& ctx, double phi, Method method) {
  const InstanceMoments m = instance_moments(instance);
  const double pi = method == Method::kExact ? dt_premium_exact(instance, ctx) : 0.0;
  ValuationReport r = dt_report(m.mu, m.m2, m.m2_dual, pi, ctx, phi, method);
  r.diagnostics.lower = instance.outcomes.front();
  r.diagnostics.truncation = instance.outcomes.back();
  return r;
}

ValuationReport dt_valuation(const ServiceTimeModel& model,
                             const DtContext& ctx, double phi, Method method) {
  ctx.validate();
  const double mu = model.mean();
  const double m2_dual = dual_moment_mean(model);
  const double pi = method == Method::kExact ? dt_premium_exact(model, ctx) : 0.0;
  ValuationReport r = dt_report(mu, model.variance(), m2_dual, pi, ctx, phi, method);
  r.diagnostics.lower = model.support().lo;
  r.diagnostics.truncation = model.truncation_point();
  return r;
}

// ---------------------------------------------------------------------------
// Rank-dependent utility

double rdu_expected_utility(const ServiceTimeModel& model,
                            const UtilityFunction& u,
                            const WeightingFunction& w) {
  return distorted_expectation(
      model, [&](double t) { return u.u(t); }, w.as_distortion());
}

double rdu_expected_utility(const DiscreteInstance& instance,
                            const UtilityFunction& u,
                            const WeightingFunction& w) {
  return distorted_expectation(
      instance, [&](double t) { return u.u(t); }, w.as_distortion());
}

double weighted_mean(const ServiceTimeModel& model, const WeightingFunction& w) {
  return distorted_expectation(
      model, [](double t) { return t; }, w.as_distortion());
}

double weighted_mean(const DiscreteInstance& instance, const WeightingFunction& w) {
  if (instance.dt) {
    const DtMetadata& md = *instance.dt;
    const Band b = band_weights(w, md.p0, md.psi, md.n);
    return md.T0 + band_average(b, md.xi);
  }
  return distorted_expectation(
      instance, [](double t) { return t; }, w.as_distortion());
}

double rdu_premium_exact(const DiscreteInstance& instance,
                         const RduContext& ctx, Diagnostics* diag) {
  ctx.validate();
  const DtMetadata& md = require_dt(instance);
  check_match(md, ctx.p0, ctx.psi);
  const double lo = md.xi.front(), hi = md.xi.back();
  if (lo == hi) return 0.0;
  check_interval(ctx.u, md.T0 + lo, md.T0 + hi);
  const Band b = band_weights(ctx.w, ctx.p0, ctx.psi, md.n);
  std::vector<double> values(md.n);
  for (std::size_t i = 0; i < md.n; ++i) values[i] = ctx.u.u(md.T0 + md.xi[i]);
  const double target = band_average(b, values);
  return solve_certainty_equivalent(ctx.u, md.T0, target, lo, hi, diag);
}

double rdu_premium_exact(const ServiceTimeModel& model, const RduContext& ctx,
                         Diagnostics* diag) {
  ctx.validate();
  require_full_span(ctx.psi, "continuous RDU premium");
  if (model.is_degenerate()) return 0.0;
  ExpectationDiagnostics ed;
  const double target = distorted_expectation(
      model, [&](double t) { return ctx.u.u(t); }, ctx.w.as_distortion(),
      Tolerance::precise(), &ed);
  check_interval(ctx.u, ed.lower, ed.truncation);
  if (diag) {
    diag->lower = ed.lower;
    diag->truncation = ed.truncation;
    diag->quadrature_subdivisions += ed.subdivisions;
    diag->quadrature_evaluations += ed.evaluations;
  }
  const double mu = model.mean();
  const double hi = std::max(ed.truncation - mu, 1e-12);
  return solve_certainty_equivalent(ctx.u, mu, target, 0.0, hi, diag);
}

double rdu_premium_approx(const RduContext& ctx, double mu, double m2,
                          double m2_dual, double m2_dual_var) {
  ctx.validate();
  require_full_span(ctx.psi, "approximate RDU premium");
  const double d1 = ctx.u.d1(mu);
  if (d1 == 0.0) raise(ErrorKind::kDerivativeZero, "u'(mu) = 0");
  const double a2 = ctx.u.d2(mu) / d1;
  const double r = weighting_derivative_ratio(ctx.w, ctx.p0);
  return 0.5 * a2 * m2 + 0.5 * r * m2_dual + 0.5 * a2 * 0.5 * r * (m2_dual_var - m2);
}

double resolve_tau_h(const RduContext& ctx, double mu, double mu_w) {
  if (ctx.tau_h) return *ctx.tau_h;
  const double den = ctx.u.d1(mu_w);
  if (den == 0.0) raise(ErrorKind::kDerivativeZero, "u'(mu_w) = 0");
  return ctx.u.d1(mu) / den;
}

namespace {

double rdu_ratio_from(const RduContext& ctx, const InstanceMoments& m,
                      double tau_h) {
  const double mu = m.mu;
  if (!(mu > 0.0)) raise(ErrorKind::kZeroCOT, "mean time is zero");
  const double d1 = ctx.u.d1(mu);
  if (d1 == 0.0) raise(ErrorKind::kDerivativeZero, "u'(mu) = 0");
  const double r2 = ctx.u.closed_form_r2(mu).value_or(mu * ctx.u.d2(mu) / d1);
  const double r = weighting_derivative_ratio(ctx.w, ctx.p0);
  const double r2_dual = mu * r;
  const double mu2 = mu * mu;
  return tau_h * (0.5 * (m.m2 / mu2) * r2 + 0.5 * (m.m2_dual / mu2) * r2_dual +
                  0.5 * r * 0.5 * r2 * (m.m2_dual_var - m.m2) / mu2);
}

void check_phi(double phi) {
  if (!(std::isfinite(phi) && phi > 0.0)) {
    raise(ErrorKind::kDomainError, "phi must be finite and > 0");
  }
}

struct RduInputs {
  InstanceMoments m;
  double mu_w = 0.0;
  double vot_w_phi1 = 0.0;  // weighted mean of -u' before dividing by phi
  double pi_exact = 0.0;
  double lower = 0.0;
  double truncation = 0.0;
};

ValuationReport rdu_report(const RduContext& ctx, const RduInputs& in,
                           double phi, Method method, Diagnostics diag) {
  check_phi(phi);
  const double mu = in.m.mu;
  if (!(mu > 0.0)) raise(ErrorKind::kZeroCOT, "mean time is zero");
  ValuationReport r;
  r.framework = "rdu";
  r.method = method;
  r.mu = mu;
  r.cv = cv_of(mu, in.m.m2);
  r.vot_at_mu = -ctx.u.d1(mu) / phi;
  const double tau_h = resolve_tau_h(ctx, mu, in.mu_w);
  if (method == Method::kExact) {
    r.pi = in.pi_exact;
    r.vot = in.vot_w_phi1 / phi;
    r.cot = r.vot * mu;
    if (r.cot == 0.0) raise(ErrorKind::kZeroCOT, "cost of time is zero");
    r.cotv = (ctx.u.u(mu) - ctx.u.u(mu + r.pi)) / phi;
    r.rho = r.cotv / r.cot;
    r.eta = r.vot_at_mu / r.vot;
  } else {
    r.pi = rdu_premium_approx(ctx, mu, in.m.m2, in.m.m2_dual, in.m.m2_dual_var);
    r.vot = r.vot_at_mu / tau_h;
    r.cot = r.vot * mu;
    if (r.cot == 0.0) raise(ErrorKind::kZeroCOT, "cost of time is zero");
    r.cotv = r.pi * r.vot_at_mu;
    r.rho = rdu_ratio_from(ctx, in.m, tau_h);
    r.eta = tau_h;
    r.rho_from_components = r.cotv / r.cot;
  }
  r.congestion_multiplier = 1.0 + r.rho;
  diag.lower = in.lower;
  diag.truncation = in.truncation;
  diag.values.emplace_back("tau_h", tau_h);
  diag.values.emplace_back("mu_w", in.mu_w);
  diag.values.emplace_back("m2_dual", in.m.m2_dual);
  diag.values.emplace_back("m2_dual_var", in.m.m2_dual_var);
  diag.notes.emplace_back("tau_h_source", ctx.tau_h ? "override" : "auto");
  r.diagnostics = std::move(diag);
  return r;
}

}  // namespace

double rdu_ratio(const DiscreteInstance& instance, const RduContext& ctx,
                 double phi) {
  ctx.validate();
  check_phi(phi);
  const InstanceMoments m = instance_moments(instance);
  if (m.m2 == 0.0 && m.m2_dual == 0.0) return 0.0;
  return rdu_ratio_from(ctx, m, resolve_tau_h(ctx, m.mu, weighted_mean(instance, ctx.w)));
}

double rdu_ratio(const ServiceTimeModel& model, const RduContext& ctx,
                 double phi) {
  ctx.validate();
  check_phi(phi);
  if (model.is_degenerate()) return 0.0;
  const InstanceMoments m = model_moments(model);
  return rdu_ratio_from(ctx, m, resolve_tau_h(ctx, m.mu, weighted_mean(model, ctx.w)));
}

ValuationReport rdu_valuation(const DiscreteInstance& instance,
                              const RduContext& ctx, double phi, Method method) {
  ctx.validate();
  const DtMetadata& md = require_dt(instance);
  check_match(md, ctx.p0, ctx.psi);
  RduInputs in;
  in.m = instance_moments(instance);
  in.mu_w = weighted_mean(instance, ctx.w);
  in.lower = instance.outcomes.front();
  in.truncation = instance.outcomes.back();
  Diagnostics diag;
  if (method == Method::kExact) {
    const Band b = band_weights(ctx.w, ctx.p0, ctx.psi, md.n);
    std::vector<double> slopes(md.n);
    for (std::size_t i = 0; i < md.n; ++i) slopes[i] = -ctx.u.d1(md.T0 + md.xi[i]);
    in.vot_w_phi1 = band_average(b, slopes);
    in.pi_exact = rdu_premium_exact(instance, ctx, &diag);
  }
  return rdu_report(ctx, in, phi, method, std::move(diag));
}

ValuationReport rdu_valuation(const ServiceTimeModel& model,
                              const RduContext& ctx, double phi, Method method) {
  ctx.validate();
  RduInputs in;
  in.m = model_moments(model);
  in.mu_w = weighted_mean(model, ctx.w);
  in.lower = model.support().lo;
  in.truncation = model.truncation_point();
  Diagnostics diag;
  if (model.is_degenerate()) {
    in.vot_w_phi1 = -ctx.u.d1(in.m.mu);
    return rdu_report(ctx, in, phi, method, std::move(diag));
  }
  if (method == Method::kExact) {
    in.vot_w_phi1 = distorted_expectation(
        model, [&](double t) { return -ctx.u.d1(t); }, ctx.w.as_distortion());
    in.pi_exact = rdu_premium_exact(model, ctx, &diag);
  }
  return rdu_report(ctx, in, phi, method, std::move(diag));
}

}  // namespace cotv

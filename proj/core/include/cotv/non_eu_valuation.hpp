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

#ifndef COTV_NON_EU_VALUATION_HPP_
#define COTV_NON_EU_VALUATION_HPP_

#include <optional>

#include "cotv/distributions.hpp"
#include "cotv/eu_valuation.hpp"
#include "cotv/preferences.hpp"

namespace cotv {

struct DtContext {
  WeightingFunction w = WeightingFunction::identity();
  double p0 = 0.5;
  double psi = 0.5;

  void validate() const;
  bool spans_all_probability() const;  // 2 psi == 1
};

struct RduContext {
  UtilityFunction u = UtilityFunction::affine();
  WeightingFunction w = WeightingFunction::identity();
  double p0 = 0.5;
  double psi = 0.5;
  std::optional<double> tau_h;  // empty means the weighted-mean rule

  void validate() const;
  DtContext dt() const { return {w, p0, psi}; }
};

// Moments an n-state instance contributes to the approximations: the
// baseline T0 as mean, and the band variance and dual moments of xi.
struct InstanceMoments {
  double mu = 0.0;
  double m2 = 0.0;
  double m2_dual = 0.0;
  double m2_dual_var = 0.0;
};

InstanceMoments instance_moments(const DiscreteInstance& instance);
InstanceMoments model_moments(const ServiceTimeModel& model);

// -integral of t against w(F(t)).
double dt_expected_utility(const ServiceTimeModel& model,
                           const WeightingFunction& w);
double dt_expected_utility(const DiscreteInstance& instance,
                           const WeightingFunction& w);

// Closed-form weighted sum of xi over the probability band.
// MetadataMismatch when the instance was built with another (p0, psi).
double dt_premium_exact(const DiscreteInstance& instance, const DtContext& ctx);
// Weighted mean minus mean; requires 2 psi = 1.
double dt_premium_exact(const ServiceTimeModel& model, const DtContext& ctx);

// (1/2) (w''/w')(p0) m2_dual. DomainError unless 2 psi = 1.
double dt_premium_approx(const DtContext& ctx, double m2_dual);

// Exact or second-order DT report. VOT = 1/phi, COT = mu/phi.
ValuationReport dt_valuation(const DiscreteInstance& instance,
                             const DtContext& ctx, double phi, Method method);
ValuationReport dt_valuation(const ServiceTimeModel& model,
                             const DtContext& ctx, double phi, Method method);

// (1/2) (m2_dual / mu^2) mu (w''/w')(p0).
double dt_ratio(const DtContext& ctx, double mu, double m2_dual);

double rdu_expected_utility(const ServiceTimeModel& model,
                            const UtilityFunction& u,
                            const WeightingFunction& w);
double rdu_expected_utility(const DiscreteInstance& instance,
                            const UtilityFunction& u,
                            const WeightingFunction& w);

// Solves D u(T0 + pi) = sum_i dw_i u(T0 + xi_i), D = w(p0 + psi) - w(p0 - psi).
double rdu_premium_exact(const DiscreteInstance& instance,
                         const RduContext& ctx, Diagnostics* diag = nullptr);
// Solves u(mu + pi) = integral of u against w(F); requires 2 psi = 1.
double rdu_premium_exact(const ServiceTimeModel& model, const RduContext& ctx,
                         Diagnostics* diag = nullptr);

// (1/2) A2 m2 + (1/2) r m2_dual + (1/4) A2 r (m2_dual_var - m2), with
// A2 = (u''/u')(mu) and r = (w''/w')(p0).
double rdu_premium_approx(const RduContext& ctx, double mu, double m2,
                          double m2_dual, double m2_dual_var);

// Weighted mean of t under w(F).
double weighted_mean(const ServiceTimeModel& model, const WeightingFunction& w);
double weighted_mean(const DiscreteInstance& instance, const WeightingFunction& w);

// u'(mu) / u'(mu_w), or the override when present.
double resolve_tau_h(const RduContext& ctx, double mu, double mu_w);

double rdu_ratio(const DiscreteInstance& instance, const RduContext& ctx,
                 double phi);
double rdu_ratio(const ServiceTimeModel& model, const RduContext& ctx,
                 double phi);

ValuationReport rdu_valuation(const DiscreteInstance& instance,
                              const RduContext& ctx, double phi, Method method);
ValuationReport rdu_valuation(const ServiceTimeModel& model,
                              const RduContext& ctx, double phi, Method method);

}  // namespace cotv

#endif  // COTV_NON_EU_VALUATION_HPP_

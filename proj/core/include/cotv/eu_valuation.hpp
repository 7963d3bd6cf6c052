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

#ifndef COTV_EU_VALUATION_HPP_
#define COTV_EU_VALUATION_HPP_

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cotv/distributions.hpp"
#include "cotv/numerics.hpp"
#include "cotv/preferences.hpp"

namespace cotv {

enum class Method { kExact, kSecondOrder };

std::string to_string(Method method);

struct EconomicContext {
  double phi = 1.0;  // marginal utility of wealth, > 0
  Method method = Method::kExact;

  void validate() const;
};

struct Diagnostics {
  double lower = 0.0;
  double truncation = 0.0;
  int quadrature_subdivisions = 0;
  long quadrature_evaluations = 0;
  int root_iterations = 0;
  double root_residual = 0.0;
  // Free-form labelled values, emitted in insertion order.
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, std::string>> notes;
};

struct ValuationReport {
  std::string framework = "eu";
  Method method = Method::kExact;
  double mu = 0.0;
  double cv = 0.0;
  double pi = 0.0;
  double vot_at_mu = 0.0;
  double vot = 0.0;
  double cot = 0.0;
  double cotv = 0.0;
  double rho = 0.0;
  double eta = 1.0;
  std::optional<double> rho_upper_bound;
  double congestion_multiplier = 1.0;
  // cotv / cot for the second-order path, whose rho comes from a closed form.
  std::optional<double> rho_from_components;
  Diagnostics diagnostics;
};

// Root tolerance for premium equations.
Tolerance premium_root_tolerance();

// Solves E[u(t)] = u(mu + pi).
double premium_exact(const UtilityFunction& u, const ServiceTimeModel& model,
                     Diagnostics* diag = nullptr);
// (sigma^2 / 2) u''(mu) / u'(mu).
double premium_approx(const UtilityFunction& u, const ServiceTimeModel& model);

double vot_at(const UtilityFunction& u, double T, const EconomicContext& ctx);
double vot_mean(const UtilityFunction& u, const ServiceTimeModel& model,
                const EconomicContext& ctx, Diagnostics* diag = nullptr);
double cot(const UtilityFunction& u, const ServiceTimeModel& model,
           const EconomicContext& ctx);
double cotv(const UtilityFunction& u, const ServiceTimeModel& model,
            const EconomicContext& ctx, Diagnostics* diag = nullptr);

// Signed R2 R3 CV^2 = -sigma^2 u'''(mu) / u'(mu).
double prudence_term(const UtilityFunction& u, const ServiceTimeModel& model);

// Exact: cotv / cot. Second order: R2 CV^2 / (2 + R2 R3 CV^2).
double ratio_rho(const UtilityFunction& u, const ServiceTimeModel& model,
                 const EconomicContext& ctx);
// (pi / mu) / (1 - sigma^2 u'''(mu) / (2 u'(mu))), equal to the coefficient
// form above.
double ratio_rho_premium_form(const UtilityFunction& u,
                              const ServiceTimeModel& model);

// 1 / (1 + R2 R3 CV^2 / 2).
double ratio_eta(const UtilityFunction& u, const ServiceTimeModel& model);
double eta_from_term(double r2r3cv2);
double eta_from_coefficients(double r2, double r3, double cv);
// VOT(mu) / E[VOT(t)].
double ratio_eta_exact(const UtilityFunction& u, const ServiceTimeModel& model);

struct RhoBound {
  double bound = 0.0;                   // CV^2 / 2
  std::optional<double> poisson_bound;  // 1/2 for exponential models
};

// NotQuadratic for non-quadratic utilities.
RhoBound rho_upper_bound(const UtilityFunction& u,
                         const ServiceTimeModel& model);

ValuationReport evaluate_eu(const UtilityFunction& u,
                            const ServiceTimeModel& model,
                            const EconomicContext& ctx);

}  // namespace cotv

#endif  // COTV_EU_VALUATION_HPP_

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

#include "cotv/errors.hpp"
#include "cotv/eu_valuation.hpp"
#include "generators.hpp"

using namespace cotv;
using cotv::testing::Gen;

namespace {

const EconomicContext kExact{1.0, Method::kExact};
const EconomicContext kSecond{1.0, Method::kSecondOrder};

double cv2(const ServiceTimeModel& m) { return m.variance() / (m.mean() * m.mean()); }

}  // namespace

TEST_CASE("Poisson service with pure quadratic utility pays half the cost of time") {
  const auto m = ServiceTimeModel::exponential(1.0);
  const auto u = UtilityFunction::pure_quadratic(-1.0);
  const ValuationReport ex = evaluate_eu(u, m, kExact);
  const ValuationReport so = evaluate_eu(u, m, kSecond);
  CHECK(ex.rho == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(so.rho == doctest::Approx(ex.rho).epsilon(1e-10));
  REQUIRE(ex.rho_upper_bound.has_value());
  CHECK(*ex.rho_upper_bound == doctest::Approx(0.5));
  CHECK(ex.congestion_multiplier == doctest::Approx(1.5));
  const RhoBound b = rho_upper_bound(u, m);
  REQUIRE(b.poisson_bound.has_value());
  CHECK(*b.poisson_bound == 0.5);
}

TEST_CASE("pure quadratic premium has a closed form") {
  // E[-t^2] = -(mu + pi)^2  =>  pi = sqrt(mu^2 + sigma^2) - mu
  for (const auto& m : {ServiceTimeModel::exponential(0.5), ServiceTimeModel::uniform(1.0, 3.0),
                        ServiceTimeModel::gamma(3.0, 2.0), ServiceTimeModel::lognormal(0.0, 0.4)}) {
    const double mu = m.mean();
    const double closed = std::sqrt(mu * mu + m.variance()) - mu;
    CHECK(premium_exact(UtilityFunction::pure_quadratic(-1.0), m) ==
          doctest::Approx(closed).epsilon(1e-12));
    CHECK(premium_approx(UtilityFunction::pure_quadratic(-1.0), m) ==
          doctest::Approx(0.5 * m.variance() / mu).epsilon(1e-14));
  }
}

TEST_CASE("VOT of -t^1.5 on exponential(1) is 1.5 Gamma(1.5)") {
  const auto u = UtilityFunction::power(1.5);
  const auto m = ServiceTimeModel::exponential(1.0);
  CHECK(vot_mean(u, m, kExact) == doctest::Approx(1.5 * std::tgamma(1.5)).epsilon(1e-12));
  CHECK(vot_at(u, 1.0, kExact) == doctest::Approx(1.5));
  CHECK(vot_at(u, 1.0, {2.0, Method::kExact}) == doctest::Approx(0.75));
  // Exact reliability ratio VOT(mu) / E[VOT].
  CHECK(ratio_eta_exact(u, m) == doctest::Approx(1.0 / std::tgamma(1.5)).epsilon(1e-12));
}

TEST_CASE("second-order ratio formulas") {
  // -t^1.5 on exponential(1): R2 = R3 = 1/2, CV = 1, R2 R3 CV^2 = 1/4.
  const auto u = UtilityFunction::power(1.5);
  const auto m = ServiceTimeModel::exponential(1.0);
  CHECK(prudence_term(u, m) == doctest::Approx(0.25));
  CHECK(ratio_rho(u, m, kSecond) == doctest::Approx(0.5 / 2.25));
  CHECK(ratio_eta(u, m) == doctest::Approx(1.0 / 1.125));
  CHECK(eta_from_coefficients(0.5, 0.5, 1.0) == doctest::Approx(1.0 / 1.125));
  CHECK(eta_from_term(2.0) == 0.5);
}

TEST_CASE("degenerate service time has no variability cost") {
  const ValuationReport r =
      evaluate_eu(UtilityFunction::power(2.0), ServiceTimeModel::degenerate(5.0), kExact);
  CHECK(r.pi == 0.0);
  CHECK(r.cotv == 0.0);
  CHECK(r.rho == 0.0);
  CHECK(r.eta == 1.0);
  CHECK(r.cv == 0.0);
  CHECK(r.cot == doctest::Approx(5.0 * 2.0 * 5.0));
}

TEST_CASE("affine utility is risk neutral") {
  const auto u = UtilityFunction::affine(3.0, 1.0);
  const auto m = ServiceTimeModel::gamma(2.0, 1.0);
  CHECK(premium_exact(u, m) == 0.0);
  CHECK(ratio_rho(u, m, kExact) == doctest::Approx(0.0).scale(1e-15));
}

TEST_CASE("error surface") {
  CHECK_THROWS_AS(rho_upper_bound(UtilityFunction::power(1.5), ServiceTimeModel::exponential(1.0)),
                  Error);
  try {
    rho_upper_bound(UtilityFunction::power(1.5), ServiceTimeModel::exponential(1.0));
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotQuadratic);
  }
  CHECK_THROWS_AS(EconomicContext({0.0, Method::kExact}).validate(), Error);
  // Utility domain must cover the support.
  CHECK_THROWS_AS(premium_exact(UtilityFunction::power(1.5, {1.0, 100.0}),
                                ServiceTimeModel::exponential(1.0)),
                  Error);
}

TEST_CASE("property: exact premium solves the indifference equation") {
  cotv::testing::for_all(41, 60, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    const UtilityFunction u = g.risk_averse_utility();
    const double pi = premium_exact(u, m);
    const double eu = expectation(m, [&](double t) { return u.u(t); });
    CHECK(u.u(m.mean() + pi) == doctest::Approx(eu).epsilon(1e-11));
    CHECK(pi >= 0.0);  // Jensen for concave u
  });
}

TEST_CASE("property: premium and ratios are invariant under positive affine transforms") {
  cotv::testing::for_all(42, 40, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    const UtilityFunction u = g.risk_averse_utility();
    const UtilityFunction v = u.affine_transform(g.log_uniform(0.05, 20.0), g.uniform(-10.0, 10.0));
    CHECK(premium_exact(v, m) == doctest::Approx(premium_exact(u, m)).epsilon(1e-9));
    CHECK(ratio_rho(v, m, kExact) == doctest::Approx(ratio_rho(u, m, kExact)).epsilon(1e-9));
    CHECK(ratio_rho(v, m, kSecond) == doctest::Approx(ratio_rho(u, m, kSecond)).epsilon(1e-12));
    CHECK(ratio_eta_exact(v, m) == doctest::Approx(ratio_eta_exact(u, m)).epsilon(1e-10));
  });
}

TEST_CASE("property: exact report satisfies rho = COTV / COT and COT = VOT mu") {
  cotv::testing::for_all(43, 40, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    const UtilityFunction u = g.risk_averse_utility();
    const double phi = g.log_uniform(0.1, 10.0);
    const ValuationReport r = evaluate_eu(u, m, {phi, Method::kExact});
    CHECK(r.rho == doctest::Approx(r.cotv / r.cot).epsilon(1e-14));
    CHECK(r.cot == doctest::Approx(r.vot * r.mu).epsilon(1e-14));
    CHECK(r.congestion_multiplier == doctest::Approx(1.0 + r.rho));
    // rho does not depend on phi.
    CHECK(r.rho == doctest::Approx(ratio_rho(u, m, kExact)).epsilon(1e-12));
  });
}

TEST_CASE("property: quadratic utilities obey rho <= CV^2 / 2 with equality at b = 0") {
  cotv::testing::for_all(44, 80, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    const double a = -g.log_uniform(0.1, 5.0);
    const double b = g.coin() ? 0.0 : -g.uniform(0.0, 5.0);
    const UtilityFunction u = UtilityFunction::quadratic(a, b, g.uniform(-3.0, 3.0));
    const double rho = ratio_rho(u, m, kExact);
    const double bound = 0.5 * cv2(m);
    CHECK(rho <= bound + 1e-9);
    if (b == 0.0) CHECK(std::fabs(rho - bound) <= 1e-9);
    // Second order: rho = R2 CV^2 / 2 exactly, and eta = 1.
    const double r2 = risk_coefficients(u, m.mean()).R2;
    CHECK(ratio_rho(u, m, kSecond) == doctest::Approx(0.5 * r2 * cv2(m)).epsilon(1e-13));
    CHECK(ratio_eta(u, m) == 1.0);
    CHECK(ratio_eta_exact(u, m) == doctest::Approx(1.0).epsilon(1e-12));
  });
}

TEST_CASE("property: eta <= 1/2 exactly when R2 R3 CV^2 >= 2") {
  cotv::testing::for_all(45, 2000, [](Gen& g) {
    const double r2 = g.uniform(0.0, 3.0), r3 = g.uniform(0.0, 6.0), cv = g.uniform(0.0, 2.0);
    const double x = r2 * r3 * cv * cv;
    CHECK((eta_from_coefficients(r2, r3, cv) <= 0.5) == (x >= 2.0));
  });
}

TEST_CASE("property: approximation error vanishes as variance shrinks") {
  cotv::testing::for_all(46, 20, [](Gen& g) {
    const UtilityFunction u = g.risk_averse_utility();
    const double mu = g.uniform(2.0, 10.0);
    double prev = INFINITY;
    for (double s : {0.4, 0.2, 0.1}) {
      const auto m = ServiceTimeModel::uniform(mu - s * std::sqrt(3.0), mu + s * std::sqrt(3.0));
      const double err = std::fabs(premium_exact(u, m) - premium_approx(u, m));
      CHECK(err <= prev);
      prev = err;
    }
  });
}

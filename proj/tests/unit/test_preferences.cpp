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
#include "cotv/preferences.hpp"
#include "generators.hpp"

using namespace cotv;
using cotv::testing::Gen;

namespace {

// Central difference of order `order` built from u itself.
double fd(const UtilityFunction& u, int order, double t) {
  const double h = 1e-3 * std::max(1.0, t);
  switch (order) {
    case 1: return (u.u(t + h) - u.u(t - h)) / (2 * h);
    case 2: return (u.d1(t + h) - u.d1(t - h)) / (2 * h);
    default: return (u.d2(t + h) - u.d2(t - h)) / (2 * h);
  }
}

}  // namespace

TEST_CASE("coefficient closed forms of the reference families") {
  const UtilityFunction q = UtilityFunction::quadratic(-1.0, -2.0);
  const RiskProfile rq = risk_coefficients(q, 3.0);
  CHECK(rq.R2 == doctest::Approx(2.0 * -1.0 * 3.0 / (2.0 * -1.0 * 3.0 - 2.0)));
  REQUIRE(rq.R3.has_value());
  CHECK(*rq.R3 == 0.0);

  const RiskProfile rp = risk_coefficients(UtilityFunction::pure_quadratic(-2.0), 4.0);
  CHECK(rp.R2 == doctest::Approx(1.0));

  const RiskProfile rw = risk_coefficients(UtilityFunction::power(1.5), 2.0);
  CHECK(rw.R2 == doctest::Approx(0.5));
  CHECK(*rw.R3 == doctest::Approx(0.5));
  CHECK(rw.A2 == doctest::Approx(0.25));
  CHECK(rw.risk_averse);
  CHECK(rw.prudent);

  const UtilityFunction cp = UtilityFunction::constant_prudence(2.5, {1.0, 50.0});
  for (double t : {1.5, 5.0, 30.0}) CHECK(*risk_coefficients(cp, t).R3 == doctest::Approx(2.5));
}

TEST_CASE("affine utility has undefined prudence coefficients") {
  const RiskProfile r = risk_coefficients(UtilityFunction::affine(2.0, 1.0), 3.0);
  CHECK(r.R2 == 0.0);
  CHECK_FALSE(r.A3.has_value());
  CHECK_FALSE(r.R3.has_value());
  CHECK_THROWS_AS(classify_moment_preference(r), Error);
}

TEST_CASE("zero slope raises DerivativeZero") {
  const UtilityFunction q = UtilityFunction::pure_quadratic(-1.0);
  try {
    risk_coefficients(q, 0.0);
    FAIL("expected DerivativeZero");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDerivativeZero);
  }
}

TEST_CASE("domain checks on construction") {
  CHECK_THROWS_AS(UtilityFunction::quadratic(1.0, 0.0), Error);
  CHECK_THROWS_AS(UtilityFunction::quadratic(-1.0, 1.0), Error);
  CHECK_THROWS_AS(UtilityFunction::power(0.5), Error);
  CHECK_THROWS_AS(UtilityFunction::affine(-1.0), Error);
  CHECK_THROWS_AS(UtilityFunction::constant_prudence(1.5, {0.0, 10.0}), Error);
  CHECK_THROWS_AS(UtilityFunction::power(2.0).affine_transform(-1.0, 0.0), Error);
  CHECK_THROWS_AS(WeightingFunction::power(0.0), Error);
  CHECK_THROWS_AS(WeightingFunction::inverse_s(-0.5), Error);
}

TEST_CASE("moment-preference labels follow the R2 = 1 and R3 = 2 benchmarks") {
  auto label = [](double r3) {
    return classify_moment_preference(
        risk_coefficients(UtilityFunction::constant_prudence(r3, {1.0, 50.0}), 10.0));
  };
  CHECK(label(1.5).variance_vs_skewness == "variance-priority");
  CHECK(label(2.0).variance_vs_skewness == "indifferent");
  CHECK(label(3.0).variance_vs_skewness == "skewness-priority");
  CHECK(classify_moment_preference(risk_coefficients(UtilityFunction::pure_quadratic(-1.0), 2.0))
            .mean_vs_variance == "indifferent");
  CHECK(classify_moment_preference(risk_coefficients(UtilityFunction::power(3.0), 2.0))
            .mean_vs_variance == "variance-priority");
  CHECK(classify_moment_preference(risk_coefficients(UtilityFunction::power(1.5), 2.0))
            .mean_vs_variance == "mean-priority");
}

TEST_CASE("risk attitude over the interval") {
  const RiskAttitude q = classify_risk_attitude(UtilityFunction::quadratic(-1.0, -1.0, 0.0, {0.0, 10.0}));
  CHECK(q.risk_averse);
  CHECK(q.prudent);  // u''' = 0 counts as weakly prudent
  const RiskAttitude p = classify_risk_attitude(UtilityFunction::power(1.5, {0.0, 10.0}));
  CHECK(p.risk_averse);
  CHECK(p.prudent);
  const RiskAttitude h = classify_risk_attitude(UtilityFunction::power(2.5, {0.0, 10.0}));
  CHECK(h.risk_averse);
  CHECK_FALSE(h.prudent);
}

TEST_CASE("property: analytic derivatives match finite differences") {
  cotv::testing::for_all(31, 100, [](Gen& g) {
    const UtilityFunction u =
        g.coin() ? g.risk_averse_utility()
                 : UtilityFunction::constant_prudence(g.uniform(0.3, 4.0), {1.0, 100.0});
    const double t = g.uniform(1.5, 20.0);
    for (int k = 1; k <= 3; ++k) {
      const double exact = k == 1 ? u.d1(t) : (k == 2 ? u.d2(t) : u.d3(t));
      const double approx = fd(u, k, t);
      CHECK(approx == doctest::Approx(exact).epsilon(1e-5).scale(std::fabs(u.d1(t)) * 1e-3));
    }
  });
}

TEST_CASE("property: coefficients are invariant under positive affine transforms") {
  cotv::testing::for_all(32, 100, [](Gen& g) {
    const UtilityFunction u = g.risk_averse_utility();
    const UtilityFunction v = u.affine_transform(g.log_uniform(0.01, 100.0), g.uniform(-50.0, 50.0));
    const double t = g.uniform(0.5, 20.0);
    const RiskProfile a = risk_coefficients(u, t), b = risk_coefficients(v, t);
    CHECK(b.R2 == doctest::Approx(a.R2).epsilon(1e-12));
    CHECK(b.A2 == doctest::Approx(a.A2).epsilon(1e-12));
    if (a.R3) CHECK(*b.R3 == doctest::Approx(*a.R3).epsilon(1e-12).scale(1e-12));
    CHECK(a.R2 == doctest::Approx(t * a.A2).epsilon(1e-14));
  });
}

TEST_CASE("property: risk-averse decreasing utilities have R2 >= 0 and prudent ones R3 >= 0") {
  cotv::testing::for_all(33, 200, [](Gen& g) {
    const UtilityFunction u = g.risk_averse_utility();
    const RiskProfile r = risk_coefficients(u, g.uniform(0.1, 50.0));
    CHECK(r.R2 >= 0.0);
    if (r.prudent && r.R3) CHECK(*r.R3 >= -1e-14);
  });
}

TEST_CASE("constant-prudence pin fixes R2 at the pin time") {
  const UtilityFunction u = UtilityFunction::constant_prudence(1.5, {5.0, 5000.0}, 1.0, {{20.0, 0.5}});
  CHECK(risk_coefficients(u, 20.0).R2 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("weighting endpoints and values") {
  for (const WeightingFunction& w :
       {WeightingFunction::identity(), WeightingFunction::power(2.0), WeightingFunction::inverse_s(0.61)}) {
    CHECK(w.w(0.0) == 0.0);
    CHECK(w.w(1.0) == 1.0);
  }
  CHECK(WeightingFunction::power(2.0).w(0.3) == doctest::Approx(0.09));
  const double p = 0.1, g = 0.61;
  const double tk = std::pow(p, g) / std::pow(std::pow(p, g) + std::pow(1 - p, g), 1 / g);
  CHECK(WeightingFunction::inverse_s(g).w(p) == doctest::Approx(tk).epsilon(1e-14));
  CHECK(WeightingFunction::inverse_s(g).w(p) > p);  // overweights small probabilities
  CHECK(WeightingFunction::power(2.0).is_quadratic());
  CHECK(weighting_derivative_ratio(WeightingFunction::power(2.0), 0.5) == doctest::Approx(2.0));
  CHECK(weighting_derivative_ratio(WeightingFunction::identity(), 0.3) == 0.0);
  CHECK_THROWS_AS(weighting_derivative_ratio(WeightingFunction::power(2.0), 1.0), Error);
}

TEST_CASE("property: weighting derivatives match finite differences") {
  cotv::testing::for_all(34, 200, [](Gen& g) {
    const WeightingFunction w = g.weighting();
    const double p = g.uniform(0.05, 0.95), h = 1e-5;
    CHECK(w.d1(p) == doctest::Approx((w.w(p + h) - w.w(p - h)) / (2 * h)).epsilon(1e-6));
    CHECK(w.d2(p) == doctest::Approx((w.d1(p + h) - w.d1(p - h)) / (2 * h)).epsilon(1e-5).scale(1e-4));
    CHECK(weighting_derivative_ratio(w, p) ==
          doctest::Approx(weighting_derivative_ratio_fd(w, p)).epsilon(1e-5).scale(1e-4));
  });
}

TEST_CASE("property: weighting is increasing and upper mass is its complement") {
  cotv::testing::for_all(35, 100, [](Gen& g) {
    const WeightingFunction w = g.weighting();
    double prev = 0.0;
    for (int i = 1; i <= 100; ++i) {
      const double p = i / 100.0;
      CHECK(w.w(p) >= prev);
      prev = w.w(p);
      CHECK(w.upper_mass(1.0 - p) == doctest::Approx(1.0 - w.w(p)).epsilon(1e-12).scale(1e-12));
    }
  });
}

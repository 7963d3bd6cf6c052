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
#include <numbers>
#include <vector>

#include <doctest.h>

#include "cotv/errors.hpp"
#include "cotv/numerics.hpp"
#include "generators.hpp"

using namespace cotv;
using cotv::testing::Gen;

TEST_CASE("integrate reproduces closed-form integrals") {
  const Tolerance tol = Tolerance::precise();
  CHECK(integrate([](double x) { return x * x; }, 0.0, 3.0, tol) == doctest::Approx(9.0).epsilon(1e-14));
  CHECK(integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, tol) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::exp(-x); }, 0.0, 50.0, tol) ==
        doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-13));
  // Integrable endpoint singularity needs subdivision.
  const IntegrationResult r = integrate_detailed([](double x) { return 1.0 / std::sqrt(x); },
                                                 1e-12, 1.0, {1e-9, 1e-9, 500});
  CHECK(r.value == doctest::Approx(2.0 - 2e-6).epsilon(1e-8));
  CHECK(r.subdivisions > 1);
}

TEST_CASE("integrate accepts empty ranges and rejects reversed ones") {
  CHECK(integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
  CHECK_THROWS_AS(integrate([](double x) { return x; }, 1.0, 0.0), Error);
}

TEST_CASE("integrate reports bad integrands and budget exhaustion") {
  CHECK_THROWS_AS(integrate([](double) { return std::nan(""); }, 0.0, 1.0), Error);
  try {
    integrate([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0, {1e-15, 1e-15, 3});
    FAIL("expected NonConvergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonConvergence);
  }
}

TEST_CASE("property: polynomials up to degree 19 integrate exactly on one panel") {
  cotv::testing::for_all(11, 50, [](Gen& g) {
    const int deg = static_cast<int>(g.index(0, 19));
    std::vector<double> c(deg + 1);
    for (double& x : c) x = g.uniform(-2.0, 2.0);
    const double lo = g.uniform(-3.0, 0.0), hi = g.uniform(0.5, 3.0);
    auto p = [&](double x) {
      double s = 0.0;
      for (int k = deg; k >= 0; --k) s = s * x + c[k];
      return s;
    };
    double exact = 0.0;
    for (int k = 0; k <= deg; ++k) {
      exact += c[k] * (std::pow(hi, k + 1) - std::pow(lo, k + 1)) / (k + 1);
    }
    const IntegrationResult r = integrate_detailed(p, lo, hi, Tolerance::precise());
    CHECK(r.value == doctest::Approx(exact).epsilon(1e-11).scale(10.0));
  });
}

TEST_CASE("find_root converges on bracketed roots") {
  CHECK(find_root([](double x) { return x * x - 2.0; }, 0.0, 2.0, Tolerance::precise()) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(find_root([](double x) { return std::cos(x) - x; }, 0.0, 1.0) ==
        doctest::Approx(0.7390851332151607).epsilon(1e-9));
  CHECK(find_root([](double x) { return x - 1.0; }, 1.0, 5.0) == 1.0);
}

TEST_CASE("find_root rejects missing brackets") {
  try {
    find_root([](double x) { return x * x + 1.0; }, -1.0, 1.0);
    FAIL("expected NoBracket");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNoBracket);
  }
}

TEST_CASE("find_root_expanding grows the bracket inside the domain") {
  const RootResult r = find_root_expanding([](double x) { return x - 37.5; }, 0.0, 1.0, 0.0,
                                           1e6, Tolerance::precise());
  CHECK(r.root == doctest::Approx(37.5).epsilon(1e-14));
  CHECK_THROWS_AS(find_root_expanding([](double x) { return x + 1.0; }, 0.0, 1.0, 0.0, 10.0,
                                      Tolerance::precise()),
                  Error);
}

TEST_CASE("property: Brent residual and bracket on random cubics") {
  cotv::testing::for_all(12, 200, [](Gen& g) {
    const double r = g.uniform(-5.0, 5.0), s = g.uniform(0.1, 3.0);
    auto f = [&](double x) { return (x - r) * ((x - r) * (x - r) + s); };
    const RootResult res = find_root_detailed(f, r - g.uniform(0.1, 10.0),
                                              r + g.uniform(0.1, 10.0), Tolerance::precise());
    CHECK(std::fabs(res.root - r) <= 1e-10);
    CHECK(res.bracket_lo <= res.root);
    CHECK(res.root <= res.bracket_hi);
  });
}

TEST_CASE("Tolerance validation") {
  CHECK_NOTHROW(Tolerance{}.validate());
  CHECK_THROWS_AS((Tolerance{-1.0, 1e-8, 10}.validate()), Error);
  CHECK_THROWS_AS((Tolerance{1e-10, 1e-8, 0}.validate()), Error);
}

TEST_CASE("random streams are reproducible and independent") {
  RandomSource a(RngStream{42, 0}), b(RngStream{42, 0}), c(RngStream{42, 1});
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t x = a.next_u64();
    CHECK(x == b.next_u64());
    differs = differs || x != c.next_u64();
  }
  CHECK(differs);
}

TEST_CASE("property: uniform draws stay in range and moments match") {
  RandomSource rng(RngStream{7, 3});
  const int n = 200000;
  double s = 0.0, s2 = 0.0, sn = 0.0, sn2 = 0.0, se = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    s += u;
    s2 += u * u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    se += rng.exponential();
  }
  CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(s2 / n - (s / n) * (s / n) == doctest::Approx(1.0 / 12.0).epsilon(0.02));
  CHECK(std::fabs(sn / n) < 0.01);
  CHECK(sn2 / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(se / n == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("gamma draws match shape moments, including shape < 1") {
  for (double shape : {0.3, 1.0, 4.5}) {
    RandomSource rng(RngStream{9, static_cast<std::uint64_t>(shape * 10)});
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape);
      REQUIRE(x >= 0.0);
      s += x;
      s2 += x * x;
    }
    const double m = s / n;
    CHECK(m == doctest::Approx(shape).epsilon(0.02));
    CHECK(s2 / n - m * m == doctest::Approx(shape).epsilon(0.05));
  }
}

TEST_CASE("mc_estimate agrees with the exact mean within its standard error") {
  const McEstimate e =
      mc_estimate([](RandomSource& r) { return r.exponential(); }, statistic_mean(), 100000, {1, 0});
  CHECK(e.n == 100000);
  CHECK(std::fabs(e.estimate - 1.0) <= 4.0 * e.std_error);
  CHECK(e.std_error == doctest::Approx(1.0 / std::sqrt(1e5)).epsilon(0.05));
}

TEST_CASE("mc_estimate is deterministic and rejects bad input") {
  auto s = [](RandomSource& r) { return r.uniform(); };
  CHECK(mc_estimate(s, statistic_max_pair_excess(), 1000, {5, 2}).estimate ==
        mc_estimate(s, statistic_max_pair_excess(), 1000, {5, 2}).estimate);
  CHECK_THROWS_AS(mc_estimate(s, statistic_mean(), 1, {5, 2}), Error);
  CHECK_THROWS_AS(mc_estimate([](RandomSource&) { return INFINITY; }, statistic_mean(), 10, {1, 1}),
                  Error);
}

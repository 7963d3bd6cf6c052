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

#include <algorithm>
#include <cmath>
#include <vector>

#include <doctest.h>

#include "cotv/distributions.hpp"
#include "cotv/errors.hpp"
#include "generators.hpp"

using namespace cotv;
using cotv::testing::Gen;

namespace {

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::kConfigError;
}

double ks_statistic(const ServiceTimeModel& m, std::uint64_t seed, int n) {
  RandomSource rng(RngStream{seed, 0});
  std::vector<double> x(n);
  for (double& v : x) v = m.sample(rng);
  std::sort(x.begin(), x.end());
  double d = 0.0;
  for (int i = 0; i < n; ++i) {
    const double f = m.cdf(x[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace

TEST_CASE("closed-form moments") {
  const auto e = ServiceTimeModel::exponential(2.0);
  CHECK(e.mean() == doctest::Approx(0.5));
  CHECK(e.variance() == doctest::Approx(0.25));
  CHECK(e.skewness() == doctest::Approx(2.0));
  const auto u = ServiceTimeModel::uniform(1.0, 3.0);
  CHECK(u.mean() == doctest::Approx(2.0));
  CHECK(u.variance() == doctest::Approx(1.0 / 3.0));
  CHECK(u.skewness() == doctest::Approx(0.0));
  const auto g = ServiceTimeModel::gamma(4.0, 2.0);
  CHECK(g.mean() == doctest::Approx(2.0));
  CHECK(g.variance() == doctest::Approx(1.0));
  CHECK(g.skewness() == doctest::Approx(1.0));
  const auto l = ServiceTimeModel::lognormal(0.0, 0.5);
  CHECK(l.mean() == doctest::Approx(std::exp(0.125)));
  CHECK(l.variance() == doctest::Approx((std::exp(0.25) - 1.0) * std::exp(0.25)));
  const auto s = ServiceTimeModel::shift_scaled(ServiceTimeModel::exponential(1.0), 3.0, 2.0);
  CHECK(s.mean() == doctest::Approx(5.0));
  CHECK(s.variance() == doctest::Approx(4.0));
  CHECK(s.skewness() == doctest::Approx(2.0));
}

TEST_CASE("degenerate model has no variability") {
  const auto d = ServiceTimeModel::degenerate(5.0);
  CHECK(d.is_degenerate());
  CHECK(d.variance() == 0.0);
  const MomentSet m = moments(d);
  CHECK(m.cv == 0.0);
  CHECK(m.m2_dual_mean == 0.0);
  CHECK(kind_of([] { moments(ServiceTimeModel::degenerate(0.0)); }) == ErrorKind::kUndefinedCV);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(ServiceTimeModel::exponential(0.0), Error);
  CHECK_THROWS_AS(ServiceTimeModel::uniform(2.0, 1.0), Error);
  CHECK_THROWS_AS(ServiceTimeModel::lognormal(0.0, -1.0), Error);
  CHECK_THROWS_AS(ServiceTimeModel::gamma(-1.0, 1.0), Error);
  CHECK_THROWS_AS(ServiceTimeModel::shift_scaled(ServiceTimeModel::exponential(1.0), 0.0, 0.0),
                  Error);
  CHECK(kind_of([] { DiscreteInstance::from({1.0, 2.0}, {0.5, 0.6}); }) ==
        ErrorKind::kInvalidMass);
  CHECK(kind_of([] { DiscreteInstance::from({1.0}, {-1.0}); }) == ErrorKind::kInvalidMass);
}

TEST_CASE("dual moments of the reference families") {
  CHECK(dual_moment_mean(ServiceTimeModel::uniform(0.0, 1.0)) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(dual_moment_mean(ServiceTimeModel::exponential(1.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dual_moment_mean(ServiceTimeModel::exponential(4.0)) == doctest::Approx(0.125).epsilon(1e-12));
  CHECK(dual_moment_mean(ServiceTimeModel::uniform(2.0, 5.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(dual_moment_variance(ServiceTimeModel::uniform(0.0, 1.0)) ==
        doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(dual_moment_variance(ServiceTimeModel::exponential(1.0)) == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(dual_moment_mean(ServiceTimeModel::gamma(1.0, 1.0)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("property: dual mean equals E[max(t1, t2)] - E[t] by product quadrature") {
  cotv::testing::for_all(21, 20, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    // E[max] = integral of 1 - F(t)^2 above the lower end.
    const double lo = m.support().lo, hi = m.truncation_point();
    const double emax =
        lo + integrate([&](double t) { return 1.0 - m.cdf(t) * m.cdf(t); }, lo, hi, Tolerance::precise());
    CHECK(dual_moment_mean(m) == doctest::Approx(emax - m.mean()).epsilon(1e-8).scale(1.0));
  });
}

TEST_CASE("property: quadrature moments match closed forms") {
  cotv::testing::for_all(22, 40, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    const double mu = m.mean();
    const double q0 = expectation(m, [](double) { return 1.0; });
    const double q1 = expectation(m, [](double t) { return t; });
    const double q2 = expectation(m, [&](double t) { return (t - mu) * (t - mu); });
    CHECK(q0 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(q1 == doctest::Approx(mu).epsilon(1e-11));
    CHECK(q2 == doctest::Approx(m.variance()).epsilon(1e-10));
  });
}

TEST_CASE("property: quantile inverts cdf and sf complements it") {
  cotv::testing::for_all(23, 40, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    for (double p : {1e-6, 0.01, 0.3, 0.5, 0.9, 0.999}) {
      const double t = m.quantile(p);
      CHECK(m.cdf(t) == doctest::Approx(p).epsilon(1e-9));
      CHECK(m.cdf(t) + m.sf(t) == doctest::Approx(1.0).epsilon(1e-14));
    }
    const double q = 1e-12;
    CHECK(m.sf(m.upper_quantile(q)) == doctest::Approx(q).epsilon(1e-6));
    CHECK(m.sf(m.truncation_point()) <= 1e-15);
  });
}

TEST_CASE("property: samplers pass a KS test at n = 1e5") {
  const double crit = 1.63 / std::sqrt(1e5);  // 1% level
  const std::vector<ServiceTimeModel> models = {
      ServiceTimeModel::exponential(1.3), ServiceTimeModel::uniform(1.0, 4.0),
      ServiceTimeModel::lognormal(0.5, 0.7), ServiceTimeModel::gamma(0.4, 2.0),
      ServiceTimeModel::gamma(3.5, 0.8),
      ServiceTimeModel::shift_scaled(ServiceTimeModel::gamma(2.0, 1.0), 1.0, 0.5)};
  std::uint64_t seed = 100;
  for (const auto& m : models) {
    CAPTURE(m.family_name());
    CHECK(ks_statistic(m, seed++, 100000) < crit);
  }
}

TEST_CASE("distorted expectation reduces to plain expectation under identity") {
  cotv::testing::for_all(24, 20, [](Gen& g) {
    const ServiceTimeModel m = g.continuous_model();
    auto f = [](double t) { return std::sqrt(t + 1.0); };
    CHECK(distorted_expectation(m, f, Distortion::identity()) ==
          doctest::Approx(expectation(m, f)).epsilon(1e-10));
    CHECK(distorted_expectation(m, [](double t) { return t; }, Distortion::square()) ==
          doctest::Approx(m.mean() + dual_moment_mean(m)).epsilon(1e-9));
  });
}

TEST_CASE("build_dt_instance lays out masses and metadata") {
  const DiscreteInstance inst = build_dt_instance(10.0, {-2.0, 0.0, 2.0}, 0.6, 0.3);
  REQUIRE(inst.dt.has_value());
  CHECK(inst.dt->n == 3);
  CHECK(inst.outcomes.front() == 8.0);
  CHECK(inst.outcomes.back() == 12.0);
  double total = 0.0;
  for (double p : inst.probabilities) total += p;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(inst.probabilities.front() == doctest::Approx(0.3));
  CHECK(inst.probabilities.back() == doctest::Approx(0.1));
  CHECK(kind_of([] { build_dt_instance(10.0, {-1.0, 2.0}, 0.5, 0.5); }) == ErrorKind::kNonZeroMean);
  CHECK(kind_of([] { build_dt_instance(10.0, {-1.0, 1.0}, 0.5, 0.6); }) == ErrorKind::kInvalidMass);
  CHECK(kind_of([] { discrete_dual_moment(DiscreteInstance::equiprobable({1.0, 2.0})); }) ==
        ErrorKind::kMetadataMissing);
}

TEST_CASE("discrete dual moments on a symmetric pair") {
  const DiscreteInstance inst = build_dt_instance(5.0, {-1.0, 1.0}, 0.5, 0.5);
  CHECK(discrete_dual_moment(inst) == doctest::Approx(0.5));
  CHECK(brute_force_max_pair_excess(inst) == doctest::Approx(0.5));
  CHECK(discrete_dual_moment_var(inst) == doctest::Approx(1.0));
}

TEST_CASE("property: discrete dual moment equals pairwise brute force") {
  cotv::testing::for_all(25, 300, [](Gen& g) {
    const DiscreteInstance inst = g.dt_instance();
    CHECK(std::fabs(discrete_dual_moment(inst) - brute_force_max_pair_excess(inst)) <= 1e-12);
    const ServiceTimeModel m = ServiceTimeModel::discrete(inst);
    const double mu = m.mean();
    CHECK(discrete_dual_moment_var(inst) ==
          doctest::Approx(distorted_expectation(inst, [&](double t) { return (t - mu) * (t - mu); },
                                                Distortion::square()))
              .epsilon(1e-12));
  });
}

TEST_CASE("property: decision weights are a probability vector") {
  cotv::testing::for_all(26, 200, [](Gen& g) {
    const DiscreteInstance inst = g.discrete();
    for (const Distortion& d : {Distortion::identity(), Distortion::square()}) {
      const std::vector<double> w = decision_weights(inst, d);
      double s = 0.0;
      for (double x : w) {
        CHECK(x >= 0.0);
        s += x;
      }
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
  });
}

TEST_CASE("property: discrete models expose their moments") {
  cotv::testing::for_all(27, 100, [](Gen& g) {
    const DiscreteInstance inst = g.discrete();
    const ServiceTimeModel m = ServiceTimeModel::discrete(inst);
    CHECK(m.mean() == doctest::Approx(inst.mean()).epsilon(1e-14));
    CHECK(expectation(m, [](double t) { return t * t; }) ==
          doctest::Approx(inst.variance() + inst.mean() * inst.mean()).epsilon(1e-12));
    CHECK(m.cdf(inst.outcomes.back()) == doctest::Approx(1.0).epsilon(1e-14));
  });
}

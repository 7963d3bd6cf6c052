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

#ifndef COTV_NUMERICS_HPP_
#define COTV_NUMERICS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace cotv {

struct Tolerance {
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  int max_iter = 200;

  // Throws DomainError when both tolerances are zero or max_iter < 1.
  void validate() const;

  // Tight setting used for model expectations and premium roots.
  static Tolerance precise() { return {1e-14, 1e-12, 2000}; }
};

using ScalarFn = std::function<double(double)>;

struct IntegrationResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int subdivisions = 0;
  long evaluations = 0;
};

// Adaptive bisection on a fixed-order Gauss-Legendre rule. The local error
// is |Q(I) - Q(I_left) - Q(I_right)| and the interval with the largest
// error is split until the total falls below max(abs_tol, rel_tol*|I|).
IntegrationResult integrate_detailed(const ScalarFn& f, double lo, double hi,
                                     const Tolerance& tol = {});

double integrate(const ScalarFn& f, double lo, double hi,
                 const Tolerance& tol = {});

struct RootResult {
  double root = 0.0;
  double residual = 0.0;
  int iterations = 0;
  double bracket_lo = 0.0;
  double bracket_hi = 0.0;
};

// Brent's method. Requires g(lo)*g(hi) <= 0; the result lies in [lo, hi].
RootResult find_root_detailed(const ScalarFn& g, double lo, double hi,
                              const Tolerance& tol = {});

double find_root(const ScalarFn& g, double lo, double hi,
                 const Tolerance& tol = {});

// Grows [lo, hi] geometrically (clamped to [domain_lo, domain_hi]) until the
// sign changes, then calls find_root_detailed.
RootResult find_root_expanding(const ScalarFn& g, double lo, double hi,
                               double domain_lo, double domain_hi,
                               const Tolerance& tol = {},
                               int max_expansions = 80);

struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

// Deterministic generator for one stream. Identical (seed, stream_id)
// pairs produce identical sequences on every platform.
class RandomSource {
 public:
  explicit RandomSource(const RngStream& stream);

  std::uint64_t next_u64() { return engine_(); }
  // [0, 1) with 53 random bits.
  double uniform();
  // (0, 1), never returns an endpoint.
  double uniform_open();
  double normal();
  double exponential();
  // Gamma(shape, 1).
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

using Sampler = std::function<double(RandomSource&)>;
using DrawFn = std::function<double()>;
// Produces one replicate of a statistic from as many draws as it needs.
using Statistic = std::function<double(const DrawFn&)>;

struct McEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

Statistic statistic_mean();
// Unbiased replicate of E[max(t1, t2)] - E[t] from one pair of draws.
Statistic statistic_max_pair_excess();

// Averages n replicates; Welford accumulation. NonFinite on any bad draw.
McEstimate mc_estimate(const Sampler& sampler, const Statistic& statistic,
                       std::size_t n, const RngStream& rng);

}  // namespace cotv

#endif  // COTV_NUMERICS_HPP_

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

#include "cotv/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "cotv/errors.hpp"

namespace cotv {

namespace {

constexpr int kGaussOrder = 10;

struct GaussRule {
  std::array<double, kGaussOrder> x{};
  std::array<double, kGaussOrder> w{};
};

// Legendre nodes by Newton iteration from the Chebyshev-like initial guess.
GaussRule make_rule() {
  GaussRule rule;
  const int n = kGaussOrder;
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::fabs(dz) < 1e-16) break;
    }
    const double weight = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    rule.w[i] = weight;
    rule.w[n - 1 - i] = weight;
  }
  return rule;
}

const GaussRule& rule() {
  static const GaussRule r = make_rule();
  return r;
}

double checked_eval(const ScalarFn& f, double t) {
  const double v = f(t);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os.precision(17);
    os << "integrand returned " << v << " at t = " << t;
    raise(ErrorKind::kNonFinite, os.str());
  }
  return v;
}

double apply_rule(const ScalarFn& f, double a, double b, long& evals) {
  const GaussRule& r = rule();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (int i = 0; i < kGaussOrder; ++i) {
    sum += r.w[i] * checked_eval(f, mid + half * r.x[i]);
  }
  evals += kGaussOrder;
  return sum * half;
}

struct Panel {
  double a;
  double b;
  double left;
  double right;
  double error;
};

Panel make_panel(const ScalarFn& f, double a, double b, double whole,
                 long& evals) {
  const double m = 0.5 * (a + b);
  const double l = apply_rule(f, a, m, evals);
  const double r = apply_rule(f, m, b, evals);
  return {a, b, l, r, std::fabs(whole - l - r)};
}

bool same_sign_strict(double x, double y) {
  return (x > 0.0 && y > 0.0) || (x < 0.0 && y < 0.0);
}

}  // namespace

void Tolerance::validate() const {
  if (!(abs_tol >= 0.0) || !(rel_tol >= 0.0) ||
      (abs_tol == 0.0 && rel_tol == 0.0)) {
    raise(ErrorKind::kDomainError,
          "tolerance needs a positive abs_tol or rel_tol");
  }
  if (max_iter < 1) raise(ErrorKind::kDomainError, "max_iter must be >= 1");
}

IntegrationResult integrate_detailed(const ScalarFn& f, double lo, double hi,
                                     const Tolerance& tol) {
  tol.validate();
  if (!std::isfinite(lo) || !std::isfinite(hi)) {
    raise(ErrorKind::kDomainError, "integration limits must be finite");
  }
  if (hi < lo) raise(ErrorKind::kDomainError, "integration requires lo < hi");
  IntegrationResult out;
  if (hi == lo) return out;

  long evals = 0;
  std::vector<Panel> panels;
  panels.reserve(static_cast<std::size_t>(tol.max_iter) + 1);
  const double whole = apply_rule(f, lo, hi, evals);
  panels.push_back(make_panel(f, lo, hi, whole, evals));

  int splits = 0;
  while (true) {
    double value = 0.0, error = 0.0;
    std::size_t worst = 0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      value += panels[i].left + panels[i].right;
      error += panels[i].error;
      if (panels[i].error > panels[worst].error) worst = i;
    }
    if (error <= std::max(tol.abs_tol, tol.rel_tol * std::fabs(value))) {
      out.value = value;
      out.error_estimate = error;
      out.subdivisions = splits;
      out.evaluations = evals;
      return out;
    }
    if (splits >= tol.max_iter) {
      std::ostringstream os;
      os.precision(6);
      os << "quadrature on [" << lo << ", " << hi << "] stopped after "
         << splits << " subdivisions with error estimate " << error;
      raise(ErrorKind::kNonConvergence, os.str());
    }
    const Panel p = panels[worst];
    const double m = 0.5 * (p.a + p.b);
    panels[worst] = make_panel(f, p.a, m, p.left, evals);
    panels.push_back(make_panel(f, m, p.b, p.right, evals));
    ++splits;
  }
}

double integrate(const ScalarFn& f, double lo, double hi,
                 const Tolerance& tol) {
  return integrate_detailed(f, lo, hi, tol).value;
}

RootResult find_root_detailed(const ScalarFn& g, double lo, double hi,
                              const Tolerance& tol) {
  tol.validate();
  if (hi < lo) std::swap(lo, hi);
  auto eval = [&](double x) {
    const double v = g(x);
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os.precision(17);
      os << "root function returned " << v << " at x = " << x;
      raise(ErrorKind::kNonFinite, os.str());
    }
    return v;
  };

  double a = lo, b = hi;
  double fa = eval(a), fb = eval(b);
  RootResult out;
  out.bracket_lo = lo;
  out.bracket_hi = hi;
  if (fa == 0.0) {
    out.root = a;
    return out;
  }
  if (fb == 0.0) {
    out.root = b;
    return out;
  }
  if (same_sign_strict(fa, fb)) {
    std::ostringstream os;
    os.precision(10);
    os << "no sign change on [" << lo << ", " << hi << "]: g = " << fa
       << ", " << fb;
    raise(ErrorKind::kNoBracket, os.str());
  }

  const double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 1; iter <= tol.max_iter; ++iter) {
    if (same_sign_strict(fb, fc)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 =
        2.0 * eps * std::fabs(b) + 0.5 * (tol.abs_tol + tol.rel_tol * std::fabs(b));
    const double xm = 0.5 * (c - b);
    if (std::fabs(xm) <= tol1 || fb == 0.0) {
      out.root = b;
      out.residual = fb;
      out.iterations = iter;
      return out;
    }
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) {
        q = -q;
      } else {
        p = -p;
      }
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q),
                             std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::fabs(d) > tol1 ? d : std::copysign(tol1, xm);
    b = std::clamp(b, lo, hi);
    fb = eval(b);
  }
  raise(ErrorKind::kNonConvergence, "root finder exceeded max_iter");
}

double find_root(const ScalarFn& g, double lo, double hi,
                 const Tolerance& tol) {
  return find_root_detailed(g, lo, hi, tol).root;
}

RootResult find_root_expanding(const ScalarFn& g, double lo, double hi,
                               double domain_lo, double domain_hi,
                               const Tolerance& tol, int max_expansions) {
  if (hi < lo) std::swap(lo, hi);
  lo = std::max(lo, domain_lo);
  hi = std::min(hi, domain_hi);
  double width = hi - lo;
  if (!(width > 0.0)) width = 1e-6 * std::max(1.0, std::fabs(lo));
  double glo = g(lo), ghi = g(hi);
  for (int k = 0; k < max_expansions; ++k) {
    if (!std::isfinite(glo) || !std::isfinite(ghi)) {
      raise(ErrorKind::kNonFinite, "root function not finite on bracket");
    }
    if (!same_sign_strict(glo, ghi)) return find_root_detailed(g, lo, hi, tol);
    if (lo <= domain_lo && hi >= domain_hi) break;
    const double nlo = std::max(domain_lo, lo - width);
    const double nhi = std::min(domain_hi, hi + width);
    width *= 2.0;
    if (nlo < lo) {
      lo = nlo;
      glo = g(lo);
    }
    if (nhi > hi) {
      hi = nhi;
      ghi = g(hi);
    }
  }
  if (!same_sign_strict(glo, ghi)) return find_root_detailed(g, lo, hi, tol);
  std::ostringstream os;
  os.precision(10);
  os << "bracket expansion failed; last bracket [" << lo << ", " << hi << "]";
  raise(ErrorKind::kNoBracket, os.str());
}

RandomSource::RandomSource(const RngStream& stream) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(stream.seed & 0xffffffffu),
      static_cast<std::uint32_t>(stream.seed >> 32),
      static_cast<std::uint32_t>(stream.stream_id & 0xffffffffu),
      static_cast<std::uint32_t>(stream.stream_id >> 32)};
  engine_.seed(seq);
}

double RandomSource::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RandomSource::uniform_open() {
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomSource::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_ = v * m;
  has_spare_ = true;
  return u * m;
}

double RandomSource::exponential() { return -std::log(uniform_open()); }

double RandomSource::gamma(double shape) {
  if (!(shape > 0.0)) raise(ErrorKind::kDomainError, "gamma shape must be > 0");
  if (shape < 1.0) {
    return gamma(shape + 1.0) * std::pow(uniform_open(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

Statistic statistic_mean() {
  return [](const DrawFn& draw) { return draw(); };
}

Statistic statistic_max_pair_excess() {
  return [](const DrawFn& draw) {
    const double t1 = draw();
    const double t2 = draw();
    return std::max(t1, t2) - 0.5 * (t1 + t2);
  };
}

McEstimate mc_estimate(const Sampler& sampler, const Statistic& statistic,
                       std::size_t n, const RngStream& rng) {
  if (n < 2) raise(ErrorKind::kDomainError, "mc_estimate needs n >= 2");
  RandomSource source(rng);
  const DrawFn draw = [&]() {
    const double t = sampler(source);
    if (!std::isfinite(t)) raise(ErrorKind::kNonFinite, "sampler drew a non-finite value");
    return t;
  };
  double mean = 0.0, m2 = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double x = statistic(draw);
    if (!std::isfinite(x)) raise(ErrorKind::kNonFinite, "statistic is not finite");
    const double delta = x - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (x - mean);
  }
  McEstimate out;
  out.estimate = mean;
  out.n = n;
  const double var = m2 / static_cast<double>(n - 1);
  out.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(n));
  return out;
}

}  // namespace cotv

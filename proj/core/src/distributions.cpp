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

#include "cotv/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "cotv/errors.hpp"

namespace cotv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMassTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

void require(bool ok, const std::string& what) {
  if (!ok) raise(ErrorKind::kDomainError, what);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }
double normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::acos(-1.0));
}
// z with P(Z > z) = q.
double normal_upper_quantile(double q) {
  return std::sqrt(2.0) * boost::math::erfc_inv(2.0 * q);
}

// Change of variables v -> t used by every continuous family.
struct Node {
  double t;
  double dens;  // density with respect to v
  double F;
  double S;
};

struct Plan {
  double v_lo = 0.0;
  double v_hi = 0.0;
  std::function<Node(double)> at;
  // Maps an integration variable bound back onto time.
  std::function<double(double)> to_time;
};

double gamma_log_norm(double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape);
}

Plan make_plan(const ServiceTimeModel& model, double upper_tail,
               double lower_tail);

Plan plan_for(const Exponential& e, double upper_tail) {
  const double rate = e.rate;
  Plan p;
  p.v_lo = 0.0;
  p.v_hi = boost::math::gamma_q_inv(4.0, upper_tail) / rate;
  p.at = [rate](double t) {
    const double s = std::exp(-rate * t);
    return Node{t, rate * s, -std::expm1(-rate * t), s};
  };
  p.to_time = [](double v) { return v; };
  return p;
}

Plan plan_for(const Uniform& u) {
  const double a = u.a, b = u.b, w = u.b - u.a;
  Plan p;
  p.v_lo = a;
  p.v_hi = b;
  p.at = [a, b, w](double t) {
    return Node{t, 1.0 / w, (t - a) / w, (b - t) / w};
  };
  p.to_time = [](double v) { return v; };
  return p;
}

Plan plan_for(const LogNormal& ln, double upper_tail, double lower_tail) {
  const double m = ln.log_mean, s = ln.log_sd;
  Plan p;
  p.v_lo = -normal_upper_quantile(lower_tail);
  p.v_hi = 3.0 * s + normal_upper_quantile(upper_tail);
  p.at = [m, s](double z) {
    return Node{std::exp(m + s * z), normal_pdf(z), normal_cdf(z),
                normal_sf(z)};
  };
  p.to_time = [m, s](double z) { return std::exp(m + s * z); };
  return p;
}

Plan plan_for(const Gamma& g, double upper_tail) {
  const double k = g.shape, beta = g.rate;
  const double t_hi = boost::math::gamma_q_inv(k + 3.0, upper_tail) / beta;
  const double log_norm = gamma_log_norm(k, beta);
  Plan p;
  if (k >= 1.0) {
    p.v_lo = 0.0;
    p.v_hi = t_hi;
    p.at = [k, beta, log_norm](double t) {
      const double dens =
          t > 0.0 ? std::exp(log_norm + (k - 1.0) * std::log(t) - beta * t)
                  : (k == 1.0 ? beta : 0.0);
      return Node{t, dens, boost::math::gamma_p(k, beta * t),
                  boost::math::gamma_q(k, beta * t)};
    };
    p.to_time = [](double v) { return v; };
  } else {
    // s = t^k removes the t^(k-1) singularity at the origin.
    p.v_lo = 0.0;
    p.v_hi = std::pow(t_hi, k);
    const double c = std::exp(log_norm) / k;
    p.at = [k, beta, c](double s) {
      const double t = std::pow(s, 1.0 / k);
      return Node{t, c * std::exp(-beta * t), boost::math::gamma_p(k, beta * t),
                  boost::math::gamma_q(k, beta * t)};
    };
    p.to_time = [k](double s) { return std::pow(s, 1.0 / k); };
  }
  return p;
}

Plan plan_for(const ShiftScaled& ss, double upper_tail, double lower_tail) {
  Plan base = make_plan(*ss.base, upper_tail, lower_tail);
  const double shift = ss.shift, scale = ss.scale;
  Plan p;
  p.v_lo = base.v_lo;
  p.v_hi = base.v_hi;
  auto at = base.at;
  p.at = [at, shift, scale](double v) {
    Node n = at(v);
    n.t = shift + scale * n.t;
    return n;
  };
  auto to_time = base.to_time;
  p.to_time = [to_time, shift, scale](double v) {
    return shift + scale * to_time(v);
  };
  return p;
}

Plan make_plan(const ServiceTimeModel& model, double upper_tail,
               double lower_tail) {
  return std::visit(
      Overloaded{
          [&](const Exponential& e) { return plan_for(e, upper_tail); },
          [&](const Uniform& u) { return plan_for(u); },
          [&](const LogNormal& l) {
            return plan_for(l, upper_tail, lower_tail);
          },
          [&](const Gamma& g) { return plan_for(g, upper_tail); },
          [&](const ShiftScaled& s) {
            return plan_for(s, upper_tail, lower_tail);
          },
          [&](const auto&) -> Plan {
            raise(ErrorKind::kDomainError, "family has no continuous plan");
          }},
      model.family());
}

// Largest tail q (<= target) with mass(q) <= target, by bisection on log q.
double solve_tail(const std::function<double(double)>& mass, double target) {
  if (mass(target) <= target) return target;
  double lo = std::log(1e-300), hi = std::log(target);
  for (int i = 0; i < 200 && hi - lo > 1e-6; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mass(std::exp(mid)) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(lo);
}

void fill_diag(ExpectationDiagnostics* diag, const Plan& p,
               const IntegrationResult& r) {
  if (!diag) return;
  diag->lower = p.to_time(p.v_lo);
  diag->truncation = p.to_time(p.v_hi);
  diag->subdivisions = r.subdivisions;
  diag->evaluations = r.evaluations;
}

void fill_diag(ExpectationDiagnostics* diag, const DiscreteInstance& inst) {
  if (!diag) return;
  diag->lower = inst.outcomes.front();
  diag->truncation = inst.outcomes.back();
  diag->subdivisions = 0;
  diag->evaluations = static_cast<long>(inst.size());
}

}  // namespace

// ---------------------------------------------------------------------------
// DiscreteInstance

DiscreteInstance DiscreteInstance::from(std::vector<double> outcomes,
                                        std::vector<double> probabilities) {
  if (outcomes.size() != probabilities.size()) {
    raise(ErrorKind::kInvalidMass,
          "outcomes and probabilities differ in length");
  }
  std::vector<std::size_t> order(outcomes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return outcomes[i] < outcomes[j];
  });
  DiscreteInstance inst;
  inst.outcomes.reserve(order.size());
  inst.probabilities.reserve(order.size());
  for (std::size_t i : order) {
    inst.outcomes.push_back(outcomes[i]);
    inst.probabilities.push_back(probabilities[i]);
  }
  inst.validate();
  return inst;
}

DiscreteInstance DiscreteInstance::equiprobable(std::vector<double> outcomes) {
  const std::size_t n = outcomes.size();
  if (n == 0) raise(ErrorKind::kInvalidMass, "empty instance");
  std::vector<double> probs(n, 1.0 / static_cast<double>(n));
  return from(std::move(outcomes), std::move(probs));
}

void DiscreteInstance::validate() const {
  if (outcomes.empty()) raise(ErrorKind::kInvalidMass, "empty instance");
  if (outcomes.size() != probabilities.size()) {
    raise(ErrorKind::kInvalidMass,
          "outcomes and probabilities differ in length");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!std::isfinite(outcomes[i])) {
      raise(ErrorKind::kDomainError, "non-finite outcome");
    }
    if (i > 0 && outcomes[i] < outcomes[i - 1]) {
      raise(ErrorKind::kDomainError, "outcomes must be sorted ascending");
    }
    const double p = probabilities[i];
    if (!(p >= 0.0) || p > 1.0) {
      raise(ErrorKind::kInvalidMass, "probability " + fmt(p) + " outside [0, 1]");
    }
    total += p;
  }
  if (std::fabs(total - 1.0) > kMassTol) {
    raise(ErrorKind::kInvalidMass, "probabilities sum to " + fmt(total));
  }
}

double DiscreteInstance::mean() const {
  double m = 0.0;
  for (std::size_t i = 0; i < size(); ++i) m += probabilities[i] * outcomes[i];
  return m;
}

double DiscreteInstance::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double d = outcomes[i] - m;
    v += probabilities[i] * d * d;
  }
  return v;
}

DiscreteInstance build_dt_instance(double T0, std::vector<double> xi,
                                   double p0, double psi,
                                   std::optional<double> t_min,
                                   std::optional<double> t_max) {
  if (xi.empty()) raise(ErrorKind::kInvalidMass, "xi must be nonempty");
  if (!(p0 > 0.0 && p0 < 1.0)) {
    raise(ErrorKind::kInvalidMass, "p0 must lie in (0, 1)");
  }
  if (!(psi > 0.0) || psi > std::min(p0, 1.0 - p0) + kMassTol) {
    raise(ErrorKind::kInvalidMass, "psi must satisfy 0 < psi <= min(p0, 1 - p0)");
  }
  if (!std::is_sorted(xi.begin(), xi.end())) {
    raise(ErrorKind::kDomainError, "xi must be sorted ascending");
  }
  const double n = static_cast<double>(xi.size());
  double sum = 0.0, scale = 0.0;
  for (double x : xi) {
    sum += x;
    scale = std::max(scale, std::fabs(x));
  }
  if (std::fabs(sum / n) > 1e-12 * std::max(1.0, scale)) {
    raise(ErrorKind::kNonZeroMean, "xi has mean " + fmt(sum / n));
  }
  const double lo = t_min.value_or(T0 + xi.front());
  const double hi = t_max.value_or(T0 + xi.back());
  if (lo > T0 + xi.front() || hi < T0 + xi.back()) {
    raise(ErrorKind::kDomainError, "t_min/t_max must enclose T0 + xi");
  }

  double m_lo = p0 - psi;
  double m_hi = 1.0 - p0 - psi;
  if (std::fabs(m_lo) <= kMassTol) m_lo = 0.0;
  if (std::fabs(m_hi) <= kMassTol) m_hi = 0.0;
  if (m_lo < 0.0 || m_hi < 0.0) {
    raise(ErrorKind::kInvalidMass, "outer masses leave [0, 1]");
  }
  const double band = 2.0 * psi / n;

  DiscreteInstance inst;
  if (m_lo > 0.0) {
    inst.outcomes.push_back(lo);
    inst.probabilities.push_back(m_lo);
  }
  for (double x : xi) {
    inst.outcomes.push_back(T0 + x);
    inst.probabilities.push_back(band);
  }
  if (m_hi > 0.0) {
    inst.outcomes.push_back(hi);
    inst.probabilities.push_back(m_hi);
  }
  inst.dt = DtMetadata{T0, p0, psi, xi.size(), std::move(xi)};
  inst.validate();
  return inst;
}

// ---------------------------------------------------------------------------
// Distortion

Distortion Distortion::identity() {
  return {[](double p) { return p; }, [](double q) { return q; },
          [](double, double) { return 1.0; }};
}

Distortion Distortion::square() {
  return {[](double p) { return p * p; },
          [](double q) { return q * (2.0 - q); },
          [](double p, double) { return 2.0 * p; }};
}

// ---------------------------------------------------------------------------
// ServiceTimeModel

ServiceTimeModel ServiceTimeModel::degenerate(double value) {
  require(std::isfinite(value) && value >= 0.0,
          "degenerate value must be finite and >= 0");
  return ServiceTimeModel(Degenerate{value});
}

ServiceTimeModel ServiceTimeModel::exponential(double rate) {
  require(std::isfinite(rate) && rate > 0.0, "exponential rate must be > 0");
  return ServiceTimeModel(Exponential{rate});
}

ServiceTimeModel ServiceTimeModel::uniform(double a, double b) {
  require(std::isfinite(a) && std::isfinite(b) && a >= 0.0 && a < b,
          "uniform needs 0 <= a < b");
  return ServiceTimeModel(Uniform{a, b});
}

ServiceTimeModel ServiceTimeModel::lognormal(double log_mean, double log_sd) {
  require(std::isfinite(log_mean) && std::isfinite(log_sd) && log_sd > 0.0,
          "lognormal needs finite log_mean and log_sd > 0");
  return ServiceTimeModel(LogNormal{log_mean, log_sd});
}

ServiceTimeModel ServiceTimeModel::gamma(double shape, double rate) {
  require(std::isfinite(shape) && shape > 0.0 && std::isfinite(rate) &&
              rate > 0.0,
          "gamma needs shape > 0 and rate > 0");
  return ServiceTimeModel(Gamma{shape, rate});
}

ServiceTimeModel ServiceTimeModel::shift_scaled(const ServiceTimeModel& base,
                                                double shift, double scale) {
  require(std::isfinite(shift) && std::isfinite(scale) && scale > 0.0,
          "shift-scaled needs finite shift and scale > 0");
  require(shift + scale * base.support().lo >= 0.0,
          "shift-scaled support must stay on t >= 0");
  return ServiceTimeModel(
      ShiftScaled{std::make_shared<const ServiceTimeModel>(base), shift, scale});
}

ServiceTimeModel ServiceTimeModel::discrete(DiscreteInstance instance) {
  instance.validate();
  require(instance.outcomes.front() >= 0.0,
          "service-time outcomes must be >= 0");
  return ServiceTimeModel(std::move(instance));
}

std::string ServiceTimeModel::family_name() const {
  return std::visit(
      Overloaded{[](const Degenerate&) { return std::string("degenerate"); },
                 [](const Exponential&) { return std::string("exponential"); },
                 [](const Uniform&) { return std::string("uniform"); },
                 [](const LogNormal&) { return std::string("lognormal"); },
                 [](const Gamma&) { return std::string("gamma"); },
                 [](const ShiftScaled&) { return std::string("shift_scaled"); },
                 [](const DiscreteInstance&) { return std::string("discrete"); }},
      family_);
}

bool ServiceTimeModel::is_discrete() const {
  return std::holds_alternative<Degenerate>(family_) ||
         std::holds_alternative<DiscreteInstance>(family_);
}

bool ServiceTimeModel::is_degenerate() const {
  if (std::holds_alternative<Degenerate>(family_)) return true;
  if (const auto* d = std::get_if<DiscreteInstance>(&family_)) {
    for (std::size_t i = 0; i < d->size(); ++i) {
      if (d->probabilities[i] > 0.0 && d->outcomes[i] != d->outcomes.front()) {
        return false;
      }
    }
    return true;
  }
  if (const auto* s = std::get_if<ShiftScaled>(&family_)) {
    return s->base->is_degenerate();
  }
  return false;
}

std::optional<DiscreteInstance> ServiceTimeModel::as_instance() const {
  if (const auto* d = std::get_if<Degenerate>(&family_)) {
    DiscreteInstance inst;
    inst.outcomes = {d->value};
    inst.probabilities = {1.0};
    return inst;
  }
  if (const auto* d = std::get_if<DiscreteInstance>(&family_)) return *d;
  if (const auto* s = std::get_if<ShiftScaled>(&family_)) {
    auto base = s->base->as_instance();
    if (!base) return std::nullopt;
    for (double& t : base->outcomes) t = s->shift + s->scale * t;
    base->dt.reset();
    return base;
  }
  return std::nullopt;
}

double ServiceTimeModel::pdf(double t) const {
  return std::visit(
      Overloaded{
          [&](const Degenerate& d) { return t == d.value ? 1.0 : 0.0; },
          [&](const Exponential& e) {
            return t < 0.0 ? 0.0 : e.rate * std::exp(-e.rate * t);
          },
          [&](const Uniform& u) {
            return (t < u.a || t > u.b) ? 0.0 : 1.0 / (u.b - u.a);
          },
          [&](const LogNormal& l) {
            if (t <= 0.0) return 0.0;
            const double z = (std::log(t) - l.log_mean) / l.log_sd;
            return normal_pdf(z) / (l.log_sd * t);
          },
          [&](const Gamma& g) {
            if (t < 0.0) return 0.0;
            if (t == 0.0) {
              if (g.shape < 1.0) return kInf;
              return g.shape == 1.0 ? g.rate : 0.0;
            }
            return std::exp(gamma_log_norm(g.shape, g.rate) +
                            (g.shape - 1.0) * std::log(t) - g.rate * t);
          },
          [&](const ShiftScaled& s) {
            return s.base->pdf((t - s.shift) / s.scale) / s.scale;
          },
          [&](const DiscreteInstance& d) {
            double m = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
              if (d.outcomes[i] == t) m += d.probabilities[i];
            }
            return m;
          }},
      family_);
}

double ServiceTimeModel::cdf(double t) const {
  return std::visit(
      Overloaded{
          [&](const Degenerate& d) { return t >= d.value ? 1.0 : 0.0; },
          [&](const Exponential& e) {
            return t <= 0.0 ? 0.0 : -std::expm1(-e.rate * t);
          },
          [&](const Uniform& u) {
            if (t <= u.a) return 0.0;
            if (t >= u.b) return 1.0;
            return (t - u.a) / (u.b - u.a);
          },
          [&](const LogNormal& l) {
            if (t <= 0.0) return 0.0;
            return normal_cdf((std::log(t) - l.log_mean) / l.log_sd);
          },
          [&](const Gamma& g) {
            return t <= 0.0 ? 0.0 : boost::math::gamma_p(g.shape, g.rate * t);
          },
          [&](const ShiftScaled& s) {
            return s.base->cdf((t - s.shift) / s.scale);
          },
          [&](const DiscreteInstance& d) {
            double c = 0.0;
            for (std::size_t i = 0; i < d.size() && d.outcomes[i] <= t; ++i) {
              c += d.probabilities[i];
            }
            return std::min(c, 1.0);
          }},
      family_);
}

double ServiceTimeModel::sf(double t) const {
  return std::visit(
      Overloaded{
          [&](const Exponential& e) {
            return t <= 0.0 ? 1.0 : std::exp(-e.rate * t);
          },
          [&](const LogNormal& l) {
            if (t <= 0.0) return 1.0;
            return normal_sf((std::log(t) - l.log_mean) / l.log_sd);
          },
          [&](const Gamma& g) {
            return t <= 0.0 ? 1.0 : boost::math::gamma_q(g.shape, g.rate * t);
          },
          [&](const ShiftScaled& s) {
            return s.base->sf((t - s.shift) / s.scale);
          },
          [&](const auto&) { return 1.0 - cdf(t); }},
      family_);
}

double ServiceTimeModel::quantile(double p) const {
  require(p >= 0.0 && p <= 1.0, "quantile needs p in [0, 1]");
  return std::visit(
      Overloaded{
          [&](const Degenerate& d) { return d.value; },
          [&](const Exponential& e) {
            return p == 1.0 ? kInf : -std::log1p(-p) / e.rate;
          },
          [&](const Uniform& u) { return u.a + p * (u.b - u.a); },
          [&](const LogNormal& l) {
            if (p == 0.0) return 0.0;
            if (p == 1.0) return kInf;
            return std::exp(l.log_mean -
                            l.log_sd * normal_upper_quantile(p));
          },
          [&](const Gamma& g) {
            if (p == 0.0) return 0.0;
            if (p == 1.0) return kInf;
            return boost::math::gamma_p_inv(g.shape, p) / g.rate;
          },
          [&](const ShiftScaled& s) {
            return s.shift + s.scale * s.base->quantile(p);
          },
          [&](const DiscreteInstance& d) {
            double c = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
              c += d.probabilities[i];
              if (c >= p && d.probabilities[i] > 0.0) return d.outcomes[i];
            }
            return d.outcomes.back();
          }},
      family_);
}

double ServiceTimeModel::upper_quantile(double q) const {
  require(q >= 0.0 && q <= 1.0, "upper_quantile needs q in [0, 1]");
  return std::visit(
      Overloaded{
          [&](const Exponential& e) {
            return q == 0.0 ? kInf : -std::log(q) / e.rate;
          },
          [&](const LogNormal& l) {
            if (q == 0.0) return kInf;
            if (q == 1.0) return 0.0;
            return std::exp(l.log_mean + l.log_sd * normal_upper_quantile(q));
          },
          [&](const Gamma& g) {
            if (q == 0.0) return kInf;
            if (q == 1.0) return 0.0;
            return boost::math::gamma_q_inv(g.shape, q) / g.rate;
          },
          [&](const ShiftScaled& s) {
            return s.shift + s.scale * s.base->upper_quantile(q);
          },
          [&](const auto&) { return quantile(1.0 - q); }},
      family_);
}

double ServiceTimeModel::sample(RandomSource& rng) const {
  return std::visit(
      Overloaded{
          [&](const Degenerate& d) { return d.value; },
          [&](const Exponential& e) { return rng.exponential() / e.rate; },
          [&](const Uniform& u) { return u.a + (u.b - u.a) * rng.uniform(); },
          [&](const LogNormal& l) {
            return std::exp(l.log_mean + l.log_sd * rng.normal());
          },
          [&](const Gamma& g) { return rng.gamma(g.shape) / g.rate; },
          [&](const ShiftScaled& s) {
            return s.shift + s.scale * s.base->sample(rng);
          },
          [&](const DiscreteInstance& d) {
            const double u = rng.uniform();
            double c = 0.0;
            for (std::size_t i = 0; i + 1 < d.size(); ++i) {
              c += d.probabilities[i];
              if (u < c) return d.outcomes[i];
            }
            return d.outcomes.back();
          }},
      family_);
}

double ServiceTimeModel::mean() const {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) { return d.value; },
          [](const Exponential& e) { return 1.0 / e.rate; },
          [](const Uniform& u) { return 0.5 * (u.a + u.b); },
          [](const LogNormal& l) {
            return std::exp(l.log_mean + 0.5 * l.log_sd * l.log_sd);
          },
          [](const Gamma& g) { return g.shape / g.rate; },
          [](const ShiftScaled& s) { return s.shift + s.scale * s.base->mean(); },
          [](const DiscreteInstance& d) { return d.mean(); }},
      family_);
}

double ServiceTimeModel::variance() const {
  return std::visit(
      Overloaded{
          [](const Degenerate&) { return 0.0; },
          [](const Exponential& e) { return 1.0 / (e.rate * e.rate); },
          [](const Uniform& u) {
            const double w = u.b - u.a;
            return w * w / 12.0;
          },
          [](const LogNormal& l) {
            const double s2 = l.log_sd * l.log_sd;
            return std::expm1(s2) * std::exp(2.0 * l.log_mean + s2);
          },
          [](const Gamma& g) { return g.shape / (g.rate * g.rate); },
          [](const ShiftScaled& s) {
            return s.scale * s.scale * s.base->variance();
          },
          [](const DiscreteInstance& d) { return d.variance(); }},
      family_);
}

double ServiceTimeModel::skewness() const {
  return std::visit(
      Overloaded{
          [](const Degenerate&) { return 0.0; },
          [](const Exponential&) { return 2.0; },
          [](const Uniform&) { return 0.0; },
          [](const LogNormal& l) {
            const double e = std::expm1(l.log_sd * l.log_sd);
            return (e + 3.0) * std::sqrt(e);
          },
          [](const Gamma& g) { return 2.0 / std::sqrt(g.shape); },
          [](const ShiftScaled& s) { return s.base->skewness(); },
          [](const DiscreteInstance& d) {
            const double m = d.mean();
            const double v = d.variance();
            if (v <= 0.0) return 0.0;
            double m3 = 0.0;
            for (std::size_t i = 0; i < d.size(); ++i) {
              const double x = d.outcomes[i] - m;
              m3 += d.probabilities[i] * x * x * x;
            }
            return m3 / std::pow(v, 1.5);
          }},
      family_);
}

Support ServiceTimeModel::support() const {
  return std::visit(
      Overloaded{
          [](const Degenerate& d) { return Support{d.value, d.value}; },
          [](const Exponential&) { return Support{0.0, kInf}; },
          [](const Uniform& u) { return Support{u.a, u.b}; },
          [](const LogNormal&) { return Support{0.0, kInf}; },
          [](const Gamma&) { return Support{0.0, kInf}; },
          [](const ShiftScaled& s) {
            const Support b = s.base->support();
            return Support{s.shift + s.scale * b.lo, s.shift + s.scale * b.hi};
          },
          [](const DiscreteInstance& d) {
            return Support{d.outcomes.front(), d.outcomes.back()};
          }},
      family_);
}

double ServiceTimeModel::truncation_point(double tail) const {
  if (is_discrete()) return support().hi;
  if (std::holds_alternative<Uniform>(family_)) return support().hi;
  const Plan p = make_plan(*this, tail, tail);
  return p.to_time(p.v_hi);
}

// ---------------------------------------------------------------------------
// Expectations

double expectation(const ServiceTimeModel& model, const ScalarFn& g,
                   const Tolerance& tol, ExpectationDiagnostics* diag) {
  if (auto inst = model.as_instance()) {
    double sum = 0.0;
    for (std::size_t i = 0; i < inst->size(); ++i) {
      if (inst->probabilities[i] == 0.0) continue;
      const double v = g(inst->outcomes[i]);
      if (!std::isfinite(v)) raise(ErrorKind::kNonFinite, "integrand not finite");
      sum += inst->probabilities[i] * v;
    }
    fill_diag(diag, *inst);
    return sum;
  }
  const double tail = ServiceTimeModel::kDefaultTail;
  const Plan p = make_plan(model, tail, tail);
  const auto at = p.at;
  const IntegrationResult r = integrate_detailed(
      [&](double v) {
        const Node n = at(v);
        return n.dens == 0.0 ? 0.0 : g(n.t) * n.dens;
      },
      p.v_lo, p.v_hi, tol);
  fill_diag(diag, p, r);
  return r.value;
}

std::vector<double> decision_weights(const DiscreteInstance& instance,
                                     const Distortion& d) {
  const std::size_t n = instance.size();
  std::vector<double> out(n);
  double cum = 0.0, prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    cum += instance.probabilities[i];
    const double here = (i + 1 == n) ? 1.0 : d.w(std::min(cum, 1.0));
    out[i] = here - prev;
    prev = here;
  }
  return out;
}

double distorted_expectation(const DiscreteInstance& instance,
                             const ScalarFn& g, const Distortion& d) {
  const std::vector<double> weights = decision_weights(instance, d);
  double sum = 0.0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    if (weights[i] == 0.0) continue;
    const double v = g(instance.outcomes[i]);
    if (!std::isfinite(v)) raise(ErrorKind::kNonFinite, "integrand not finite");
    sum += weights[i] * v;
  }
  return sum;
}

double distorted_expectation(const ServiceTimeModel& model, const ScalarFn& g,
                             const Distortion& d, const Tolerance& tol,
                             ExpectationDiagnostics* diag) {
  if (auto inst = model.as_instance()) {
    fill_diag(diag, *inst);
    return distorted_expectation(*inst, g, d);
  }
  const double target = ServiceTimeModel::kDefaultTail;
  const double upper = solve_tail(d.upper_mass, target);
  const double lower = solve_tail(d.w, target);
  const Plan p = make_plan(model, upper, lower);
  const auto at = p.at;
  const auto density = d.density;
  const IntegrationResult r = integrate_detailed(
      [&](double v) {
        const Node n = at(v);
        if (n.dens == 0.0) return 0.0;
        return g(n.t) * density(n.F, n.S) * n.dens;
      },
      p.v_lo, p.v_hi, tol);
  fill_diag(diag, p, r);
  return r.value;
}

double dual_moment_mean(const ServiceTimeModel& model, const Tolerance& tol) {
  if (model.is_degenerate()) return 0.0;
  const double mu = model.mean();
  return distorted_expectation(
      model, [mu](double t) { return t - mu; }, Distortion::square(), tol);
}

double dual_moment_variance(const ServiceTimeModel& model,
                            const Tolerance& tol) {
  if (model.is_degenerate()) return 0.0;
  const double mu = model.mean();
  return distorted_expectation(
      model,
      [mu](double t) {
        const double x = t - mu;
        return x * x;
      },
      Distortion::square(), tol);
}

MomentSet moments(const ServiceTimeModel& model) {
  MomentSet m;
  m.mu = model.mean();
  m.variance = model.variance();
  m.skewness = model.skewness();
  if (m.mu == 0.0) raise(ErrorKind::kUndefinedCV, "mean is zero");
  m.cv = std::sqrt(m.variance) / m.mu;
  m.m2_dual_mean = dual_moment_mean(model);
  m.m2_dual_var = dual_moment_variance(model);
  return m;
}

namespace {

const DtMetadata& require_dt(const DiscreteInstance& instance) {
  if (!instance.dt) {
    raise(ErrorKind::kMetadataMissing, "instance carries no DT metadata");
  }
  const DtMetadata& md = *instance.dt;
  if (md.xi.size() != md.n || md.n == 0) {
    raise(ErrorKind::kMetadataMissing, "DT metadata has inconsistent n");
  }
  return md;
}

}  // namespace

double discrete_dual_moment(const DiscreteInstance& instance) {
  const DtMetadata& md = require_dt(instance);
  const double n = static_cast<double>(md.n);
  double sum = 0.0;
  for (std::size_t i = 0; i < md.n; ++i) {
    sum += md.xi[i] * 2.0 * static_cast<double>(i + 1);
  }
  return 4.0 * md.psi * md.psi / (n * n) * sum;
}

double discrete_dual_moment_var(const DiscreteInstance& instance) {
  const DtMetadata& md = require_dt(instance);
  const double n = static_cast<double>(md.n);
  double sum = 0.0;
  for (std::size_t i = 0; i < md.n; ++i) {
    sum += md.xi[i] * md.xi[i] * (2.0 * static_cast<double>(i + 1) - 1.0);
  }
  return 4.0 * md.psi * md.psi / (n * n) * sum;
}

double brute_force_max_pair_excess(const DiscreteInstance& instance) {
  double e_max = 0.0;
  for (std::size_t i = 0; i < instance.size(); ++i) {
    for (std::size_t j = 0; j < instance.size(); ++j) {
      e_max += instance.probabilities[i] * instance.probabilities[j] *
               std::max(instance.outcomes[i], instance.outcomes[j]);
    }
  }
  return e_max - instance.mean();
}

Sampler make_sampler(const ServiceTimeModel& model) {
  auto shared = std::make_shared<const ServiceTimeModel>(model);
  return [shared](RandomSource& rng) { return shared->sample(rng); };
}

}  // namespace cotv

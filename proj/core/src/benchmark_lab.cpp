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

#include "cotv/benchmark_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cotv/errors.hpp"
#include "cotv/eu_valuation.hpp"

namespace cotv {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

double eu_of(const UtilityFunction& u, const DiscreteInstance& inst) {
  double s = 0.0;
  for (std::size_t i = 0; i < inst.size(); ++i) {
    s += inst.probabilities[i] * u.u(inst.outcomes[i]);
  }
  return s;
}

}  // namespace

std::string to_string(Choice c) {
  switch (c) {
    case Choice::kS1: return "S1";
    case Choice::kS2: return "S2";
    case Choice::kIndifferent: return "indifferent";
    case Choice::kMixed: return "mixed";
  }
  return "unknown";
}

LotteryPair build_lottery_pair(double T0, double l, const DiscreteInstance& gamma) {
  if (!(T0 > 0.0)) raise(ErrorKind::kDomainError, "T0 must be > 0");
  if (!(l > 0.0 && l < 1.0)) raise(ErrorKind::kDomainError, "l must lie in (0, 1)");
  gamma.validate();
  if (gamma.outcomes.front() < -1.0) {
    raise(ErrorKind::kDomainError, "gamma support must lie in [-1, inf)");
  }
  if (std::fabs(gamma.mean()) > 1e-12) {
    raise(ErrorKind::kNonZeroMean, "gamma has mean " + fmt(gamma.mean()));
  }
  std::vector<double> o1, p1, o2, p2;
  for (std::size_t j = 0; j < gamma.size(); ++j) {
    o1.push_back(T0 * (1.0 - l) * (1.0 + gamma.outcomes[j]));
    p1.push_back(0.5 * gamma.probabilities[j]);
    o2.push_back(T0 * (1.0 + gamma.outcomes[j]));
    p2.push_back(0.5 * gamma.probabilities[j]);
  }
  o1.push_back(T0);
  p1.push_back(0.5);
  o2.push_back(T0 * (1.0 - l));
  p2.push_back(0.5);
  LotteryPair lp;
  lp.T0 = T0;
  lp.l = l;
  lp.gamma = gamma;
  lp.S1 = DiscreteInstance::from(std::move(o1), std::move(p1));
  lp.S2 = DiscreteInstance::from(std::move(o2), std::move(p2));
  if (std::fabs(lp.S1.mean() - lp.S2.mean()) > 1e-12 * T0) {
    raise(ErrorKind::kNonZeroMean, "lotteries differ in expected time");
  }
  return lp;
}

ThresholdOutcome rp_threshold_experiment(const UtilityFunction& u, double T0,
                                         double l, const DiscreteInstance& gamma) {
  const LotteryPair lp = build_lottery_pair(T0, l, gamma);
  const Interval& iv = u.interval();
  std::vector<double> times = lp.S1.outcomes;
  times.insert(times.end(), lp.S2.outcomes.begin(), lp.S2.outcomes.end());
  ThresholdOutcome out;
  out.r3_min = std::numeric_limits<double>::infinity();
  out.r3_max = -std::numeric_limits<double>::infinity();
  for (double t : times) {
    if (t < iv.lo || t > iv.hi) {
      raise(ErrorKind::kDomainError,
            "realized time " + fmt(t) + " leaves the utility interval");
    }
    const RiskProfile rp = risk_coefficients(u, t);
    if (!rp.R3) raise(ErrorKind::kUndefinedCoefficient, "R3 undefined at t = " + fmt(t));
    out.r3_min = std::min(out.r3_min, *rp.R3);
    out.r3_max = std::max(out.r3_max, *rp.R3);
  }
  out.eu_s1 = eu_of(u, lp.S1);
  out.eu_s2 = eu_of(u, lp.S2);
  const double scale = std::max({std::fabs(out.eu_s1), std::fabs(out.eu_s2), 1.0});
  const double diff = out.eu_s1 - out.eu_s2;
  if (std::fabs(diff) <= 64.0 * std::numeric_limits<double>::epsilon() * scale) {
    out.prefers = Choice::kIndifferent;
  } else {
    out.prefers = diff > 0.0 ? Choice::kS1 : Choice::kS2;
  }
  if (out.r3_min >= 2.0 && out.r3_max > 2.0) {
    out.predicted_by_r3 = Choice::kS2;
  } else if (out.r3_max <= 2.0 && out.r3_min < 2.0) {
    out.predicted_by_r3 = Choice::kS1;
  } else if (out.r3_min == 2.0 && out.r3_max == 2.0) {
    out.predicted_by_r3 = Choice::kIndifferent;
  } else {
    out.predicted_by_r3 = Choice::kMixed;
  }
  out.agree = out.prefers == out.predicted_by_r3;
  return out;
}

RraTradeoff rra_tradeoff_check(const UtilityFunction& u, double t) {
  const RiskProfile rp = risk_coefficients(u, t);
  if (!(u.d1(t) < 0.0)) raise(ErrorKind::kDomainError, "needs u'(t) < 0");
  RraTradeoff out;
  out.second_moment_side = t * t * (-u.d2(t));
  out.first_moment_side = t * (-u.d1(t));
  out.r2 = rp.R2;
  const double diff = out.second_moment_side - out.first_moment_side;
  const double scale = std::max(std::fabs(out.first_moment_side), 1e-300);
  if (std::fabs(diff) <= kBenchmarkBand * scale) {
    out.sign = 0;
  } else {
    out.sign = diff > 0.0 ? 1 : -1;
  }
  const int r2_side = std::fabs(out.r2 - 1.0) <= kBenchmarkBand ? 0 : (out.r2 > 1.0 ? 1 : -1);
  out.consistent_with_r2 = out.sign == r2_side;
  return out;
}

double vertex_identity_check(double a, double h, double k,
                             const ServiceTimeModel& model) {
  if (!(a < 0.0) || h > 0.0 || k > 0.0) {
    raise(ErrorKind::kDomainError, "vertex form needs a < 0, h <= 0, k <= 0");
  }
  const double lhs = expectation(model, [&](double t) {
    const double d = t - h;
    return a * d * d + k;
  });
  const double m = model.mean();
  const double rhs = a * (model.variance() + (m - h) * (m - h)) + k;
  return std::fabs(lhs - rhs);
}

BoundSweepResult bound_sweep(const BoundSweepConfig& config) {
  BoundSweepResult res;
  const EconomicContext ctx{1.0, Method::kExact};
  for (const NamedModel& nm : config.models) {
    for (const QuadraticPair& q : config.pairs) {
      BoundSweepRow row;
      row.model = nm.name;
      row.a = q.a;
      row.b = q.b;
      const UtilityFunction u = UtilityFunction::quadratic(q.a, q.b, 0.0);
      const ServiceTimeModel& m = nm.model;
      const double mu = m.mean();
      row.cv = std::sqrt(m.variance()) / mu;
      row.rho_exact = ratio_rho(u, m, ctx);
      row.bound = rho_upper_bound(u, m).bound;
      row.slack = row.bound - row.rho_exact;
      row.r2r3cv2 = prudence_term(u, m);
      row.eta = ratio_eta(u, m);
      row.equality_row = q.b == 0.0;
      if (row.rho_exact > row.bound + config.tolerance) {
        row.violation = true;
        res.violations.push_back(nm.name + " a=" + fmt(q.a) + " b=" + fmt(q.b) +
                                 ": rho " + fmt(row.rho_exact) + " > bound " +
                                 fmt(row.bound));
      }
      if (row.equality_row) {
        res.max_slack_at_equality =
            std::max(res.max_slack_at_equality, std::fabs(row.slack));
        if (std::fabs(row.slack) > config.tolerance) {
          row.violation = true;
          res.violations.push_back(nm.name + " a=" + fmt(q.a) +
                                   " b=0: equality off by " + fmt(row.slack));
        }
      }
      const bool eta_low = row.eta <= 0.5;
      const bool term_high = row.r2r3cv2 >= 2.0;
      if (eta_low != term_high) {
        row.violation = true;
        res.violations.push_back(nm.name + " a=" + fmt(q.a) + " b=" + fmt(q.b) +
                                 ": eta threshold mismatch");
      }
      res.rows.push_back(row);
    }
  }
  return res;
}

double congestion_multiplier(double rho) {
  if (!(rho >= 0.0)) raise(ErrorKind::kDomainError, "congestion multiplier needs rho >= 0");
  return rho + 1.0;
}

std::vector<ConvergenceRow> approximation_convergence_study(
    const UtilityFunction& u, const DiscreteInstance& x,
    const std::vector<double>& sigma_grid, double mu) {
  x.validate();
  if (sigma_grid.empty()) raise(ErrorKind::kDomainError, "sigma grid is empty");
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    if (!(sigma_grid[i] > 0.0) || (i > 0 && !(sigma_grid[i] < sigma_grid[i - 1]))) {
      raise(ErrorKind::kDomainError, "sigma grid must be positive and strictly decreasing");
    }
  }
  std::vector<ConvergenceRow> rows;
  for (double s : sigma_grid) {
    std::vector<double> t(x.outcomes.size());
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = mu + s * x.outcomes[i];
    const ServiceTimeModel model =
        ServiceTimeModel::discrete(DiscreteInstance::from(t, x.probabilities));
    ConvergenceRow row;
    row.sigma = s;
    row.pi_exact = premium_exact(u, model);
    row.pi_approx = premium_approx(u, model);
    row.error = std::fabs(row.pi_exact - row.pi_approx);
    row.scaled_error = row.error / (s * s);
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      row.error_ratio = row.error > 0.0 ? prev.error / row.error : 0.0;
      row.scaled_ratio = row.scaled_error > 0.0 ? prev.scaled_error / row.scaled_error : 0.0;
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace cotv

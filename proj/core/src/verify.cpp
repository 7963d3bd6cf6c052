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

#include "cotv/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "cotv/benchmark_lab.hpp"
#include "cotv/errors.hpp"
#include "cotv/eu_valuation.hpp"
#include "cotv/non_eu_valuation.hpp"
#include "cotv/numerics.hpp"
#include "cotv/scenario.hpp"

namespace cotv {

namespace {

std::string num(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct Criterion {
  const char* id;
  const char* name;
  double time_limit;
  void (*run)(CheckResult&, const VerifyOptions&,
              const std::function<double(double)>& tol);
};

double uniform_in(RandomSource& rng, double lo, double hi) {
  return lo + (hi - lo) * rng.uniform();
}

std::size_t index_in(RandomSource& rng, std::size_t lo, std::size_t hi) {
  return lo + static_cast<std::size_t>(rng.next_u64() % (hi - lo + 1));
}

// Zero-mean, ascending deviations scaled to max |xi| = spread.
std::vector<double> random_xi(RandomSource& rng, std::size_t n, double spread) {
  std::vector<double> xi(n);
  for (double& x : xi) x = rng.normal();
  double mean = 0.0;
  for (double x : xi) mean += x;
  mean /= static_cast<double>(n);
  double big = 0.0;
  for (double& x : xi) {
    x -= mean;
    big = std::max(big, std::fabs(x));
  }
  for (double& x : xi) x *= spread / big;
  std::sort(xi.begin(), xi.end());
  mean = 0.0;
  for (double x : xi) mean += x;
  mean /= static_cast<double>(n);
  for (double& x : xi) x -= mean;
  std::sort(xi.begin(), xi.end());
  return xi;
}

// ---------------------------------------------------------------------------

void a1(CheckResult& r, const VerifyOptions&, const std::function<double(double)>& tol) {
  const ServiceTimeModel m = ServiceTimeModel::exponential(1.0);
  const UtilityFunction u = UtilityFunction::pure_quadratic(-1.0);
  const ValuationReport ex = evaluate_eu(u, m, {1.0, Method::kExact});
  const ValuationReport so = evaluate_eu(u, m, {1.0, Method::kSecondOrder});
  const double d1 = std::fabs(ex.rho - 0.5);
  const double d2 = std::fabs(so.rho - ex.rho);
  r.tolerance = 1e-6;
  r.expected = "rho_exact=0.5 (1e-6), rho_second_order=rho_exact (1e-10)";
  r.actual = "rho_exact=" + num(ex.rho) + ", rho_second_order=" + num(so.rho);
  r.pass = d1 <= tol(1e-6) && d2 <= tol(1e-10);
}

void a2(CheckResult& r, const VerifyOptions&, const std::function<double(double)>& tol) {
  BoundSweepConfig cfg;
  for (double a : {-0.25, -0.5, -1.0, -2.0, -4.0}) {
    for (double b : {0.0, -0.25, -0.5, -1.0, -2.0}) cfg.pairs.push_back({a, b});
  }
  cfg.models = {{"exponential", ServiceTimeModel::exponential(1.0)},
                {"uniform", ServiceTimeModel::uniform(0.0, 2.0)},
                {"lognormal", ServiceTimeModel::lognormal(0.0, 0.5)},
                {"gamma", ServiceTimeModel::gamma(2.0, 1.5)}};
  cfg.tolerance = tol(1e-9);
  const BoundSweepResult res = bound_sweep(cfg);
  r.tolerance = 1e-9;
  r.expected = "0 violations of rho <= CV^2/2 over 100 rows; |rho - CV^2/2| <= 1e-9 at b=0";
  r.actual = std::to_string(res.violations.size()) + " violations over " +
             std::to_string(res.rows.size()) + " rows; max equality slack " +
             num(res.max_slack_at_equality);
  r.pass = res.rows.size() == 100 && res.violations.empty() &&
           res.max_slack_at_equality <= tol(1e-9);
}

void a3(CheckResult& r, const VerifyOptions&, const std::function<double(double)>& tol) {
  const DiscreteInstance x = DiscreteInstance::from({-1.0, 1.0}, {0.5, 0.5});
  const std::vector<double> sigmas = {0.4, 0.2, 0.1};
  const auto quad = approximation_convergence_study(UtilityFunction::pure_quadratic(-1.0), x, sigmas);
  const auto power = approximation_convergence_study(UtilityFunction::power(1.5), x, sigmas);
  double worst = 0.0;
  bool ratios_ok = true, scaled_ok = true;
  std::string ratios, scaled;
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    const double s2 = sigmas[i] * sigmas[i];
    const double closed = std::sqrt(1.0 + s2) - 1.0 - 0.5 * s2;
    worst = std::max(worst, std::fabs((quad[i].pi_exact - quad[i].pi_approx) - closed));
    if (i == 0) continue;
    ratios += (ratios.empty() ? "" : ",") + num(quad[i].error_ratio);
    scaled += (scaled.empty() ? "" : ",") + num(power[i].scaled_ratio);
    ratios_ok = ratios_ok && std::fabs(quad[i].error_ratio - 16.0) <= tol(2.0);
    scaled_ok = scaled_ok && power[i].scaled_ratio - 2.0 >= -tol(0.0);
  }
  r.tolerance = 1e-10;
  r.expected = "closed-form residual (1e-10); quadratic error ratios in [14,18]; power scaled ratios >= 2";
  r.actual = "max residual deviation " + num(worst) + "; ratios " + ratios + "; scaled " + scaled;
  r.pass = worst <= tol(1e-10) && ratios_ok && scaled_ok;
}

void a4(CheckResult& r, const VerifyOptions&, const std::function<double(double)>& tol) {
  std::vector<UtilityFunction> us = {
      UtilityFunction::pure_quadratic(-1.0),
      UtilityFunction::pure_quadratic(-3.0, 2.0),
      UtilityFunction::quadratic(-0.5, -1.0, 0.0),
      UtilityFunction::quadratic(-2.0, -0.3, 4.0),
      UtilityFunction::quadratic(-1.0, 0.0, 0.0).affine_transform(2.5, -1.0)};
  const std::vector<ServiceTimeModel> models = {
      ServiceTimeModel::exponential(1.0), ServiceTimeModel::uniform(0.5, 3.0),
      ServiceTimeModel::gamma(3.0, 2.0), ServiceTimeModel::lognormal(0.2, 0.6)};
  double worst_so = 0.0, worst_exact = 0.0;
  for (const auto& u : us) {
    for (const auto& m : models) {
      worst_so = std::max(worst_so, std::fabs(ratio_eta(u, m) - 1.0));
      worst_exact = std::max(worst_exact, std::fabs(ratio_eta_exact(u, m) - 1.0));
    }
  }
  std::size_t exceptions = 0, points = 0, below = 0;
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      for (int k = 1; k <= 10; ++k) {
        const double r2 = 0.25 * i, r3 = 0.5 * j, cv = 0.2 * k;
        const double x = r2 * r3 * cv * cv;
        const bool lhs = eta_from_coefficients(r2, r3, cv) <= 0.5;
        const bool rhs = x >= 2.0;
        ++points;
        below += lhs ? 1 : 0;
        exceptions += lhs != rhs ? 1 : 0;
      }
    }
  }
  r.tolerance = 0.0;
  r.expected = "eta = 1 for quadratic utilities; 0 exceptions to (eta <= 1/2 iff R2 R3 CV^2 >= 2) on 1000 points";
  r.actual = "max |eta_second_order - 1| = " + num(worst_so) + ", max |eta_exact - 1| = " +
             num(worst_exact) + "; " + std::to_string(exceptions) + " exceptions, " +
             std::to_string(below) + " of " + std::to_string(points) + " with eta <= 1/2";
  r.pass = worst_so <= tol(0.0) && worst_exact <= tol(1e-12) && points == 1000 &&
           static_cast<double>(exceptions) <= tol(0.0);
}

void a5(CheckResult& r, const VerifyOptions& opt, const std::function<double(double)>& tol) {
  const ServiceTimeModel un = ServiceTimeModel::uniform(0.0, 1.0);
  const ServiceTimeModel ex = ServiceTimeModel::exponential(1.0);
  const double qu = dual_moment_mean(un), qe = dual_moment_mean(ex);
  const McEstimate mu_ = mc_estimate(make_sampler(un), statistic_max_pair_excess(), 1000000,
                                     RngStream{opt.seed, 51});
  const McEstimate me = mc_estimate(make_sampler(ex), statistic_max_pair_excess(), 1000000,
                                    RngStream{opt.seed, 52});
  const double zu = std::fabs(mu_.estimate - 1.0 / 6.0) / mu_.std_error;
  const double ze = std::fabs(me.estimate - 0.5) / me.std_error;
  RandomSource rng(RngStream{opt.seed, 53});
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = index_in(rng, 2, 16);
    const double T0 = uniform_in(rng, 2.0, 20.0);
    const DiscreteInstance inst =
        build_dt_instance(T0, random_xi(rng, n, uniform_in(rng, 0.1, 0.9) * T0), 0.5, 0.5);
    worst = std::max(worst, std::fabs(discrete_dual_moment(inst) - brute_force_max_pair_excess(inst)));
  }
  r.tolerance = 1e-8;
  r.expected = "m2_dual uniform 1/6 and exponential 1/2 (1e-8); MC within 3 s.e.; discrete = brute force (1e-12)";
  r.actual = "uniform " + num(qu) + ", exponential " + num(qe) + "; MC z " + num(zu) + ", " +
             num(ze) + "; max discrete deviation " + num(worst);
  r.pass = std::fabs(qu - 1.0 / 6.0) <= tol(1e-8) && std::fabs(qe - 0.5) <= tol(1e-8) &&
           zu <= 3.0 + tol(0.0) && ze <= 3.0 + tol(0.0) && worst <= tol(1e-12);
}

void a6(CheckResult& r, const VerifyOptions& opt, const std::function<double(double)>& tol) {
  RandomSource rng(RngStream{opt.seed, 61});
  const DtContext sq{WeightingFunction::power(2.0), 0.5, 0.5};
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = index_in(rng, 2, 16);
    const double T0 = uniform_in(rng, 2.0, 20.0);
    const DiscreteInstance inst =
        build_dt_instance(T0, random_xi(rng, n, uniform_in(rng, 0.1, 0.9) * T0), 0.5, 0.5);
    const double exact = dt_premium_exact(inst, sq);
    const double approx = dt_premium_approx(sq, discrete_dual_moment(inst));
    worst = std::max(worst, std::fabs(exact - approx));
  }

  const DtContext is{WeightingFunction::inverse_s(0.61), 0.5, 0.5};
  const std::vector<double> base = {-1.0, -1.0 / 3.0, 1.0 / 3.0, 1.0};
  std::vector<double> errors;
  for (double eps : {1.0, 0.5, 0.25, 0.125}) {
    std::vector<double> xi = base;
    for (double& x : xi) x *= eps;
    const DiscreteInstance inst = build_dt_instance(5.0, xi, 0.5, 0.5);
    errors.push_back(std::fabs(dt_premium_exact(inst, is) -
                               dt_premium_approx(is, discrete_dual_moment(inst))));
  }
  bool faster = true;
  std::string ratios;
  for (std::size_t i = 1; i < errors.size(); ++i) {
    const double ratio = errors[i - 1] / errors[i];
    ratios += (ratios.empty() ? "" : ",") + num(ratio);
    faster = faster && ratio > 4.0 - tol(0.0);
  }
  r.tolerance = 1e-12;
  r.expected = "w=p^2: |exact - approx| <= 1e-12; inverse-S: error ratio per halving of spread > 4";
  r.actual = "w=p^2 max deviation " + num(worst) + "; inverse-S error ratios " + ratios;
  r.pass = worst <= tol(1e-12) && faster;
}

void a7(CheckResult& r, const VerifyOptions& opt, const std::function<double(double)>& tol) {
  RandomSource rng(RngStream{opt.seed, 71});
  double worst_eu = 0.0, worst_dt = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = index_in(rng, 2, 8);
    const double T0 = uniform_in(rng, 3.0, 10.0);
    const DiscreteInstance inst =
        build_dt_instance(T0, random_xi(rng, n, uniform_in(rng, 0.1, 0.8) * T0), 0.5, 0.5);
    const ServiceTimeModel model = ServiceTimeModel::discrete(inst);

    const UtilityFunction u =
        trial % 2 == 0 ? UtilityFunction::power(uniform_in(rng, 1.2, 3.0))
                       : UtilityFunction::quadratic(uniform_in(rng, -2.0, -0.5),
                                                    uniform_in(rng, -1.0, 0.0), 0.0);
    const RduContext id{u, WeightingFunction::identity(), 0.5, 0.5, std::nullopt};
    const ValuationReport re = rdu_valuation(inst, id, 1.0, Method::kExact);
    const ValuationReport ee = evaluate_eu(u, model, {1.0, Method::kExact});
    const ValuationReport rs = rdu_valuation(inst, id, 1.0, Method::kSecondOrder);
    for (double d : {re.pi - ee.pi, re.rho - ee.rho, rs.pi - premium_approx(u, model),
                     rs.rho - premium_approx(u, model) / model.mean()}) {
      worst_eu = std::max(worst_eu, std::fabs(d));
    }

    const WeightingFunction w = trial % 2 == 0
                                    ? WeightingFunction::power(uniform_in(rng, 1.2, 3.0))
                                    : WeightingFunction::inverse_s(uniform_in(rng, 0.5, 0.95));
    const RduContext lin{UtilityFunction::affine(uniform_in(rng, 0.5, 2.0), 0.0), w, 0.5, 0.5,
                         std::nullopt};
    const DtContext dt{w, 0.5, 0.5};
    for (Method m : {Method::kExact, Method::kSecondOrder}) {
      const ValuationReport a = rdu_valuation(inst, lin, 1.0, m);
      const ValuationReport b = dt_valuation(inst, dt, 1.0, m);
      worst_dt = std::max({worst_dt, std::fabs(a.pi - b.pi), std::fabs(a.rho - b.rho)});
    }
  }
  r.tolerance = 1e-10;
  r.expected = "identity weighting = EU and affine utility = DT for premium and ratio (1e-10), 50 instances";
  r.actual = "max EU deviation " + num(worst_eu) + ", max DT deviation " + num(worst_dt);
  r.pass = worst_eu <= tol(1e-10) && worst_dt <= tol(1e-10);
}

void a8(CheckResult& r, const VerifyOptions&, const std::function<double(double)>& tol) {
  std::size_t trials = 0, hits = 0;
  std::string misses;
  for (double r3 : {1.2, 1.5, 2.5, 3.0}) {
    const UtilityFunction u = UtilityFunction::constant_prudence(r3, {1.0, 20.0});
    const Choice want = r3 < 2.0 ? Choice::kS1 : Choice::kS2;
    for (double l : {0.01, 0.05, 0.1}) {
      for (double g : {0.05, 0.1, 0.2}) {
        for (const DiscreteInstance& gamma :
             {DiscreteInstance::from({-g, g}, {0.5, 0.5}),
              DiscreteInstance::from({-g, 0.5 * g}, {1.0 / 3.0, 2.0 / 3.0}),
              DiscreteInstance::from({-0.5 * g, g}, {2.0 / 3.0, 1.0 / 3.0})}) {
          const ThresholdOutcome o = rp_threshold_experiment(u, 10.0, l, gamma);
          ++trials;
          if (o.prefers == want) {
            ++hits;
          } else if (misses.size() < 80) {
            misses += " R3=" + num(r3) + ",l=" + num(l) + ",g=" + num(g);
          }
        }
      }
    }
  }
  r.tolerance = 0.0;
  r.expected = "R3 in {1.2,1.5} prefer S1 and R3 in {2.5,3.0} prefer S2 in every trial";
  r.actual = std::to_string(hits) + " of " + std::to_string(trials) + " trials" +
             (misses.empty() ? "" : "; misses:" + misses);
  r.pass = static_cast<double>(trials - hits) <= tol(0.0);
}

void a9(CheckResult& r, const VerifyOptions& opt, const std::function<double(double)>& tol) {
  RandomSource rng(RngStream{opt.seed, 91});
  const std::vector<ServiceTimeModel> models = {
      ServiceTimeModel::exponential(0.7), ServiceTimeModel::uniform(1.0, 4.0),
      ServiceTimeModel::lognormal(0.3, 0.5), ServiceTimeModel::gamma(2.5, 1.2),
      ServiceTimeModel::shift_scaled(ServiceTimeModel::exponential(1.0), 2.0, 0.5)};
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const double a = uniform_in(rng, -3.0, -0.1);
    const double h = uniform_in(rng, -5.0, 0.0);
    const double k = uniform_in(rng, -10.0, 0.0);
    worst = std::max(worst, vertex_identity_check(a, h, k, models[trial % models.size()]));
  }
  r.tolerance = 1e-10;
  r.expected = "residual < 1e-10 over 50 (a,h,k) x model combinations";
  r.actual = "max residual " + num(worst);
  r.pass = worst < tol(1e-10);
}

constexpr const char* kValueConfig = R"({
  "framework": "eu",
  "distribution": {"family": "gamma", "params": {"shape": 2.0, "rate": 1.5}},
  "preference": {"family": "power", "params": {"k": 1.5}},
  "method": "both",
  "seed": 12345,
  "mc_samples": 20000
})";

constexpr const char* kSweepConfig = R"({
  "framework": "rdu",
  "distribution": {"family": "exponential", "params": {"rate": 1.0}},
  "preference": {"family": "pure_quadratic", "params": {"a": -1.0}},
  "weighting": {"family": "inverse_s", "params": {"gamma": 0.7}},
  "method": "both",
  "seed": 7,
  "sweep": {"kind": "grid", "axes": [
    {"path": "distribution.params.rate", "values": [0.5, 1.0, 2.0]},
    {"path": "weighting.params.gamma", "values": [0.6, 0.8]}]}
})";

std::string run_capture(const std::string& cmd, int* status) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) {
    *status = -1;
    return out;
  }
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof(buf), p)) > 0) out.append(buf, got);
  const int st = pclose(p);
  *status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return out;
}

std::string quoted(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

void a10(CheckResult& r, const VerifyOptions& opt, const std::function<double(double)>& tol) {
  bool value_same = false, sweep_same = false, quick_ok = false, covers = false;
  if (opt.cli_path) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() /
                         ("cotv-verify-" + std::to_string(opt.seed) + "-" +
                          std::to_string(static_cast<long>(::getpid())));
    fs::create_directories(dir);
    const fs::path vcfg = dir / "value.json", scfg = dir / "sweep.json";
    std::ofstream(vcfg) << kValueConfig;
    std::ofstream(scfg) << kSweepConfig;
    const std::string cli = quoted(*opt.cli_path);
    int s1 = 0, s2 = 0, s3 = 0, s4 = 0, s5 = 0;
    const std::string v1 = run_capture(cli + " value --config " + quoted(vcfg.string()), &s1);
    const std::string v2 = run_capture(cli + " value --config " + quoted(vcfg.string()), &s2);
    const std::string w1 = run_capture(cli + " sweep --config " + quoted(scfg.string()), &s3);
    const std::string w2 = run_capture(cli + " sweep --config " + quoted(scfg.string()), &s4);
    const std::string q = run_capture(cli + " verify --profile quick", &s5);
    value_same = s1 == 0 && s2 == 0 && !v1.empty() && v1 == v2;
    sweep_same = s3 == 0 && s4 == 0 && !w1.empty() && w1 == w2;
    quick_ok = s5 == 0;
    covers = true;
    for (const char* id : {"A1", "A2", "A3", "A4", "A5", "A6"}) {
      covers = covers && q.find(std::string(" ") + id + " ") != std::string::npos;
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
  } else {
    auto value_once = [] {
      ReportEnvelope e = run_scenario(parse_config(kValueConfig));
      e.wall_time_seconds.reset();
      return render_json(e);
    };
    auto sweep_once = [] { return render_csv(run_sweep(parse_config(kSweepConfig))); };
    value_same = value_once() == value_once();
    sweep_same = sweep_once() == sweep_once();
    VerifyOptions quick = opt;
    quick.profile = Profile::kQuick;
    const std::vector<CheckResult> res = run_verify(quick);
    quick_ok = all_passed(res);
    covers = res.size() == 6;
    for (std::size_t i = 0; i < res.size(); ++i) {
      covers = covers && res[i].id == "A" + std::to_string(i + 1);
    }
  }
  r.tolerance = 0.0;
  r.expected = "value and sweep byte-identical across runs; verify quick exits 0 covering A1-A6";
  auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
  r.actual = "value identical " + yn(value_same) + ", sweep identical " + yn(sweep_same) +
             ", quick exit 0 " + yn(quick_ok) + ", covers A1-A6 " + yn(covers) +
             (opt.cli_path ? " (subprocess)" : " (in-process)");
  r.pass = value_same && sweep_same && quick_ok && covers && tol(0.0) >= 0.0;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"A1", "poisson_service_bound", 1.0, a1},
      {"A2", "quadratic_bound_sweep", 30.0, a2},
      {"A3", "premium_approximation_order", 5.0, a3},
      {"A4", "reliability_ratio_identities", 5.0, a4},
      {"A5", "dual_moments", 60.0, a5},
      {"A6", "dt_quadratic_weighting_exactness", 5.0, a6},
      {"A7", "rdu_reduction_identities", 10.0, a7},
      {"A8", "rp_threshold_lab", 5.0, a8},
      {"A9", "vertex_identity", 10.0, a9},
      {"A10", "cli_determinism", 60.0, a10}};
  return all;
}

}  // namespace

std::string to_string(Profile p) { return p == Profile::kQuick ? "quick" : "full"; }

Profile parse_profile(const std::string& name) {
  if (name == "quick") return Profile::kQuick;
  if (name == "full") return Profile::kFull;
  raise(ErrorKind::kConfigError, "profile: expected quick or full, got '" + name + "'");
}

std::vector<std::string> criteria_ids(Profile p) {
  std::vector<std::string> ids;
  const std::size_t count = p == Profile::kQuick ? 6 : criteria().size();
  for (std::size_t i = 0; i < count; ++i) ids.emplace_back(criteria()[i].id);
  return ids;
}

CheckResult run_criterion(const std::string& id, const VerifyOptions& options) {
  for (const Criterion& c : criteria()) {
    if (id != c.id) continue;
    CheckResult r;
    r.id = c.id;
    r.name = c.name;
    r.time_limit = c.time_limit;
    const std::function<double(double)> tol = [&](double t) {
      return options.tolerance_hook ? options.tolerance_hook(r.id, t) : t;
    };
    const auto start = std::chrono::steady_clock::now();
    try {
      c.run(r, options, tol);
    } catch (const std::exception& e) {
      r.pass = false;
      r.actual = std::string("error: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (r.seconds > r.time_limit) r.pass = false;
    return r;
  }
  raise(ErrorKind::kConfigError, "unknown criterion " + id);
}

std::vector<CheckResult> run_verify(const VerifyOptions& options) {
  std::vector<CheckResult> out;
  for (const std::string& id : criteria_ids(options.profile)) {
    out.push_back(run_criterion(id, options));
  }
  return out;
}

std::string format_check(const CheckResult& r) {
  char t[64];
  std::snprintf(t, sizeof(t), "%.3fs/%gs", r.seconds, r.time_limit);
  return std::string(r.pass ? "PASS" : "FAIL") + " " + r.id + " " + r.name +
         " | expected: " + r.expected + " | actual: " + r.actual +
         " | tolerance: " + num(r.tolerance) + " | time: " + t;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.pass; });
}

}  // namespace cotv

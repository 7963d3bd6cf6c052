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

#include "cotv/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <initializer_list>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "cotv/benchmark_lab.hpp"
#include "cotv/errors.hpp"

namespace cotv {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

[[noreturn]] void config_fail(const std::string& path, const std::string& msg) {
  raise(ErrorKind::kConfigError, (path.empty() ? "config" : path) + ": " + msg);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

void check_object(const json& j, const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected an object");
}

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
  check_object(j, path);
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || it.key() == a;
    if (!ok) config_fail(join(path, it.key()), "unknown key");
  }
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) config_fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) config_fail(path, "number must be finite");
  return v;
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) config_fail(path, "expected a string");
  return j.get<std::string>();
}

std::vector<double> as_numbers(const json& j, const std::string& path) {
  if (!j.is_array()) config_fail(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string one_of(const json& j, const std::string& path,
                   std::initializer_list<const char*> choices) {
  const std::string s = as_string(j, path);
  for (const char* c : choices) {
    if (s == c) return s;
  }
  std::string list;
  for (const char* c : choices) list += (list.empty() ? "" : ", ") + std::string(c);
  config_fail(path, "'" + s + "' is not one of {" + list + "}");
}

struct ParamRule {
  const char* name;
  bool required;
  double fallback;
};

ParamList read_params(const json& parent, const std::string& path,
                      std::initializer_list<ParamRule> rules,
                      std::initializer_list<const char*> array_keys = {}) {
  const std::string ppath = join(path, "params");
  json params = parent.contains("params") ? parent.at("params") : json::object();
  check_object(params, ppath);
  for (auto it = params.begin(); it != params.end(); ++it) {
    bool ok = false;
    for (const ParamRule& r : rules) ok = ok || it.key() == r.name;
    for (const char* a : array_keys) ok = ok || it.key() == a;
    if (!ok) config_fail(join(ppath, it.key()), "unknown parameter");
  }
  ParamList out;
  for (const ParamRule& r : rules) {
    if (params.contains(r.name)) {
      out.emplace_back(r.name, as_number(params.at(r.name), join(ppath, r.name)));
    } else if (r.required) {
      config_fail(join(ppath, r.name), "required parameter missing");
    } else if (!std::isnan(r.fallback)) {
      out.emplace_back(r.name, r.fallback);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<double> param(const ParamList& p, const std::string& name) {
  for (const auto& [k, v] : p) {
    if (k == name) return v;
  }
  return std::nullopt;
}

double need(const ParamList& p, const std::string& name) {
  auto v = param(p, name);
  if (!v) raise(ErrorKind::kConfigError, "missing parameter " + name);
  return *v;
}

constexpr double kNone = std::numeric_limits<double>::quiet_NaN();

DistributionSpec parse_distribution(const json& j, const std::string& path,
                                    bool allow_name = false) {
  if (allow_name) {
    check_keys(j, path, {"name", "family", "params", "base"});
  } else {
    check_keys(j, path, {"family", "params", "base"});
  }
  if (!j.contains("family")) config_fail(join(path, "family"), "required");
  DistributionSpec s;
  s.family = one_of(j.at("family"), join(path, "family"),
                    {"degenerate", "exponential", "uniform", "lognormal", "gamma",
                     "shift_scaled", "discrete", "dt_instance"});
  const std::string ppath = join(path, "params");
  if (j.contains("base") && s.family != "shift_scaled") {
    config_fail(join(path, "base"), "only shift_scaled takes a base");
  }
  if (s.family == "degenerate") {
    s.params = read_params(j, path, {{"value", true, 0}});
  } else if (s.family == "exponential") {
    s.params = read_params(j, path, {{"rate", false, 1.0}});
  } else if (s.family == "uniform") {
    s.params = read_params(j, path, {{"a", true, 0}, {"b", true, 0}});
  } else if (s.family == "lognormal") {
    s.params = read_params(j, path, {{"log_mean", true, 0}, {"log_sd", true, 0}});
  } else if (s.family == "gamma") {
    s.params = read_params(j, path, {{"shape", true, 0}, {"rate", false, 1.0}});
  } else if (s.family == "shift_scaled") {
    s.params = read_params(j, path, {{"shift", false, 0.0}, {"scale", false, 1.0}});
    if (!j.contains("base")) config_fail(join(path, "base"), "required for shift_scaled");
    s.base = std::make_shared<DistributionSpec>(
        parse_distribution(j.at("base"), join(path, "base")));
  } else if (s.family == "discrete") {
    s.params = read_params(j, path, {}, {"outcomes", "probabilities"});
    const json& p = j.at("params");
    if (!p.contains("outcomes")) config_fail(join(ppath, "outcomes"), "required");
    s.outcomes = as_numbers(p.at("outcomes"), join(ppath, "outcomes"));
    if (p.contains("probabilities")) {
      s.probabilities = as_numbers(p.at("probabilities"), join(ppath, "probabilities"));
    } else {
      s.probabilities.assign(s.outcomes.size(),
                             s.outcomes.empty() ? 0.0 : 1.0 / s.outcomes.size());
    }
  } else {
    s.params = read_params(j, path,
                           {{"T0", true, 0}, {"p0", false, 0.5}, {"psi", false, 0.5},
                            {"t_min", false, kNone}, {"t_max", false, kNone}},
                           {"xi"});
    const json& p = j.at("params");
    if (!p.contains("xi")) config_fail(join(ppath, "xi"), "required");
    s.xi = as_numbers(p.at("xi"), join(ppath, "xi"));
  }
  return s;
}

PreferenceSpec parse_preference(const json& j, const std::string& path) {
  check_keys(j, path, {"family", "params", "interval", "pin", "transform"});
  if (!j.contains("family")) config_fail(join(path, "family"), "required");
  PreferenceSpec s;
  s.family = one_of(j.at("family"), join(path, "family"),
                    {"quadratic", "pure_quadratic", "power", "constant_prudence", "affine"});
  if (s.family == "quadratic") {
    s.params = read_params(j, path, {{"a", true, 0}, {"b", true, 0}, {"c", false, 0.0}});
  } else if (s.family == "pure_quadratic") {
    s.params = read_params(j, path, {{"a", false, -1.0}, {"c", false, 0.0}});
  } else if (s.family == "power") {
    s.params = read_params(j, path, {{"k", true, 0}});
  } else if (s.family == "constant_prudence") {
    s.params = read_params(j, path, {{"r3", true, 0}, {"c", false, 1.0}});
  } else {
    s.params = read_params(j, path, {{"m", false, 1.0}, {"c", false, 0.0}});
  }
  if (j.contains("interval")) {
    const auto iv = as_numbers(j.at("interval"), join(path, "interval"));
    if (iv.size() != 2) config_fail(join(path, "interval"), "expected [lo, hi]");
    s.interval = {iv[0], iv[1]};
  } else if (s.family == "constant_prudence") {
    config_fail(join(path, "interval"), "required for constant_prudence");
  }
  if (j.contains("pin")) {
    if (s.family != "constant_prudence") {
      config_fail(join(path, "pin"), "only constant_prudence accepts a pin");
    }
    const json& p = j.at("pin");
    check_keys(p, join(path, "pin"), {"t", "r2"});
    if (!p.contains("t") || !p.contains("r2")) config_fail(join(path, "pin"), "needs t and r2");
    s.pin = std::make_pair(as_number(p.at("t"), join(path, "pin.t")),
                           as_number(p.at("r2"), join(path, "pin.r2")));
  }
  if (j.contains("transform")) {
    const json& t = j.at("transform");
    check_keys(t, join(path, "transform"), {"alpha", "beta"});
    if (t.contains("alpha")) s.alpha = as_number(t.at("alpha"), join(path, "transform.alpha"));
    if (t.contains("beta")) s.beta = as_number(t.at("beta"), join(path, "transform.beta"));
  }
  return s;
}

WeightingSpec parse_weighting(const json& j, const std::string& path) {
  check_keys(j, path, {"family", "params", "p0", "psi", "tau_h"});
  if (!j.contains("family")) config_fail(join(path, "family"), "required");
  WeightingSpec s;
  s.family = one_of(j.at("family"), join(path, "family"), {"identity", "power", "inverse_s"});
  if (s.family == "identity") {
    read_params(j, path, {});
  } else {
    s.gamma = need(read_params(j, path, {{"gamma", true, 0}}), "gamma");
  }
  if (j.contains("p0")) s.p0 = as_number(j.at("p0"), join(path, "p0"));
  if (j.contains("psi")) s.psi = as_number(j.at("psi"), join(path, "psi"));
  if (j.contains("tau_h")) {
    const json& t = j.at("tau_h");
    if (t.is_string()) {
      if (t.get<std::string>() != "auto") config_fail(join(path, "tau_h"), "expected \"auto\" or a number");
    } else {
      s.tau_h = as_number(t, join(path, "tau_h"));
    }
  }
  return s;
}

std::uint64_t parse_seed(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    const auto v = j.get<std::int64_t>();
    if (v < 0) config_fail(path, "seed must be non-negative");
    return static_cast<std::uint64_t>(v);
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) config_fail(path, "invalid seed");
    return v;
  }
  config_fail(path, "seed must be an unsigned integer");
}

std::size_t grid_size(const std::vector<SweepAxis>& axes) {
  std::size_t total = 1;
  for (const SweepAxis& a : axes) {
    if (a.values.empty()) return 0;
    if (total > kMaxGridPoints / a.values.size() + 1) return kMaxGridPoints + 1;
    total *= a.values.size();
  }
  return total;
}

SweepSpec parse_sweep(const json& j, const std::string& path) {
  check_object(j, path);
  if (!j.contains("kind")) config_fail(join(path, "kind"), "required");
  SweepSpec s;
  s.kind = one_of(j.at("kind"), join(path, "kind"), {"grid", "convergence", "bound"});
  if (s.kind == "grid") {
    check_keys(j, path, {"kind", "axes"});
    if (!j.contains("axes") || !j.at("axes").is_array() || j.at("axes").empty()) {
      config_fail(join(path, "axes"), "expected a nonempty array");
    }
    const json& axes = j.at("axes");
    for (std::size_t i = 0; i < axes.size(); ++i) {
      const std::string ap = join(path, "axes") + "[" + std::to_string(i) + "]";
      check_keys(axes[i], ap, {"path", "values"});
      if (!axes[i].contains("path") || !axes[i].contains("values")) {
        config_fail(ap, "needs path and values");
      }
      SweepAxis a;
      a.path = as_string(axes[i].at("path"), join(ap, "path"));
      if (a.path.rfind("sweep", 0) == 0) config_fail(join(ap, "path"), "cannot sweep the sweep block");
      a.values = as_numbers(axes[i].at("values"), join(ap, "values"));
      if (a.values.empty()) config_fail(join(ap, "values"), "grid axis is empty");
      s.axes.push_back(std::move(a));
    }
    if (grid_size(s.axes) > kMaxGridPoints) {
      raise(ErrorKind::kGridTooLarge, "sweep grid exceeds " + std::to_string(kMaxGridPoints) + " points");
    }
  } else if (s.kind == "convergence") {
    check_keys(j, path, {"kind", "sigmas", "x", "mu"});
    if (!j.contains("sigmas")) config_fail(join(path, "sigmas"), "required");
    s.sigmas = as_numbers(j.at("sigmas"), join(path, "sigmas"));
    if (s.sigmas.empty()) config_fail(join(path, "sigmas"), "grid is empty");
    if (j.contains("x")) {
      const json& x = j.at("x");
      check_keys(x, join(path, "x"), {"outcomes", "probabilities"});
      if (!x.contains("outcomes")) config_fail(join(path, "x.outcomes"), "required");
      s.x_outcomes = as_numbers(x.at("outcomes"), join(path, "x.outcomes"));
      if (x.contains("probabilities")) {
        s.x_probabilities = as_numbers(x.at("probabilities"), join(path, "x.probabilities"));
      } else {
        s.x_probabilities.assign(s.x_outcomes.size(), 1.0 / s.x_outcomes.size());
      }
    } else {
      s.x_outcomes = {-1.0, 1.0};
      s.x_probabilities = {0.5, 0.5};
    }
    if (j.contains("mu")) s.mu = as_number(j.at("mu"), join(path, "mu"));
  } else {
    check_keys(j, path, {"kind", "a", "b", "models"});
    for (const char* k : {"a", "b", "models"}) {
      if (!j.contains(k)) config_fail(join(path, k), "required");
    }
    s.a_values = as_numbers(j.at("a"), join(path, "a"));
    s.b_values = as_numbers(j.at("b"), join(path, "b"));
    const json& models = j.at("models");
    if (!models.is_array() || models.empty()) config_fail(join(path, "models"), "expected a nonempty array");
    for (std::size_t i = 0; i < models.size(); ++i) {
      const std::string mp = join(path, "models") + "[" + std::to_string(i) + "]";
      DistributionSpec d = parse_distribution(models[i], mp, true);
      std::string name = models[i].contains("name")
                             ? as_string(models[i].at("name"), join(mp, "name"))
                             : d.family;
      s.models.emplace_back(std::move(name), std::move(d));
    }
    const std::size_t points = s.a_values.size() * s.b_values.size() * s.models.size();
    if (points == 0) config_fail(path, "bound grid is empty");
    if (points > kMaxGridPoints) raise(ErrorKind::kGridTooLarge, "bound grid too large");
  }
  return s;
}

// ---------------------------------------------------------------------------
// Canonical echo

json params_json(const ParamList& p) {
  json j = json::object();
  for (const auto& [k, v] : p) j[k] = v;
  return j;
}

json distribution_json(const DistributionSpec& s) {
  json j;
  j["family"] = s.family;
  json p = params_json(s.params);
  if (s.family == "discrete") {
    p["outcomes"] = s.outcomes;
    p["probabilities"] = s.probabilities;
  }
  if (s.family == "dt_instance") p["xi"] = s.xi;
  j["params"] = p;
  if (s.base) j["base"] = distribution_json(*s.base);
  return j;
}

json config_json(const ScenarioConfig& c) {
  json j;
  j["framework"] = c.framework;
  j["distribution"] = distribution_json(c.distribution);
  if (c.framework != "dt") {
    json p;
    p["family"] = c.preference.family;
    p["params"] = params_json(c.preference.params);
    p["interval"] = {c.preference.interval.lo, c.preference.interval.hi};
    if (c.preference.pin) {
      p["pin"] = {{"t", c.preference.pin->first}, {"r2", c.preference.pin->second}};
    }
    p["transform"] = {{"alpha", c.preference.alpha}, {"beta", c.preference.beta}};
    j["preference"] = p;
  }
  if (c.weighting) {
    const WeightingSpec& w = *c.weighting;
    json wj;
    wj["family"] = w.family;
    wj["params"] = w.family == "identity" ? json::object() : json{{"gamma", w.gamma}};
    wj["p0"] = w.p0;
    wj["psi"] = w.psi;
    if (w.tau_h) {
      wj["tau_h"] = *w.tau_h;
    } else {
      wj["tau_h"] = "auto";
    }
    j["weighting"] = wj;
  }
  j["economics"] = {{"phi", c.phi}};
  j["method"] = c.method;
  j["seed"] = c.seed;
  j["mc_samples"] = c.mc_samples;
  if (c.sweep) {
    const SweepSpec& s = *c.sweep;
    json sj;
    sj["kind"] = s.kind;
    if (s.kind == "grid") {
      json axes = json::array();
      for (const SweepAxis& a : s.axes) axes.push_back({{"path", a.path}, {"values", a.values}});
      sj["axes"] = axes;
    } else if (s.kind == "convergence") {
      sj["sigmas"] = s.sigmas;
      sj["x"] = {{"outcomes", s.x_outcomes}, {"probabilities", s.x_probabilities}};
      sj["mu"] = s.mu;
    } else {
      sj["a"] = s.a_values;
      sj["b"] = s.b_values;
      json models = json::array();
      for (const auto& [name, d] : s.models) {
        json m = distribution_json(d);
        m["name"] = name;
        models.push_back(m);
      }
      sj["models"] = models;
    }
    j["sweep"] = sj;
  }
  j["output"] = {{"format", c.output_format}, {"path", c.output_path}};
  return j;
}

ScenarioConfig parse_config_json(const json& root) {
  check_keys(root, "", {"framework", "distribution", "preference", "weighting",
                              "economics", "method", "seed", "mc_samples", "sweep", "output"});
  ScenarioConfig c;
  if (root.contains("framework")) {
    c.framework = one_of(root.at("framework"), "framework", {"eu", "dt", "rdu"});
  }
  if (!root.contains("distribution")) config_fail("distribution", "required");
  c.distribution = parse_distribution(root.at("distribution"), "distribution");
  if (root.contains("preference")) {
    c.preference = parse_preference(root.at("preference"), "preference");
  } else if (c.framework != "dt") {
    config_fail("preference", "required for framework " + c.framework);
  }
  if (root.contains("weighting")) {
    if (c.framework == "eu") config_fail("weighting", "not allowed for framework eu");
    c.weighting = parse_weighting(root.at("weighting"), "weighting");
  } else if (c.framework != "eu") {
    config_fail("weighting", "required for framework " + c.framework);
  }
  if (root.contains("economics")) {
    const json& e = root.at("economics");
    check_keys(e, "economics", {"phi"});
    if (e.contains("phi")) c.phi = as_number(e.at("phi"), "economics.phi");
  }
  if (!(c.phi > 0.0)) config_fail("economics.phi", "must be > 0");
  if (root.contains("method")) {
    c.method = one_of(root.at("method"), "method", {"exact", "second_order", "both"});
  }
  if (root.contains("seed")) c.seed = parse_seed(root.at("seed"), "seed");
  if (root.contains("mc_samples")) c.mc_samples = parse_seed(root.at("mc_samples"), "mc_samples");
  if (root.contains("sweep")) c.sweep = parse_sweep(root.at("sweep"), "sweep");
  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, "output", {"format", "path"});
    if (o.contains("format")) c.output_format = one_of(o.at("format"), "output.format", {"json", "csv"});
    if (o.contains("path")) c.output_path = as_string(o.at("path"), "output.path");
  }

  // Cross-field validation by construction.
  auto guard = [](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kConfigError) throw;
      config_fail(path, e.what());
    }
  };
  guard("distribution", [&] { build_model(c.distribution); });
  if (c.framework != "dt") guard("preference", [&] { build_utility(c.preference); });
  if (c.weighting) {
    guard("weighting", [&] {
      build_weighting(*c.weighting);
      DtContext{build_weighting(*c.weighting), c.weighting->p0, c.weighting->psi}.validate();
    });
  }
  if (c.sweep && c.sweep->kind == "bound") {
    for (const auto& [name, d] : c.sweep->models) {
      guard("sweep.models." + name, [&] { build_model(d); });
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Output helpers

void check_finite(double v, const std::string& field) {
  if (!std::isfinite(v)) raise(ErrorKind::kNonFinite, "report field " + field + " is not finite");
}

ojson number_or_null(const std::optional<double>& v) {
  return v ? ojson(*v) : ojson(nullptr);
}

ojson report_json(const ValuationReport& r) {
  ojson j;
  j["framework"] = r.framework;
  j["method"] = to_string(r.method);
  j["mu"] = r.mu;
  j["cv"] = r.cv;
  j["pi"] = r.pi;
  j["vot_at_mu"] = r.vot_at_mu;
  j["vot"] = r.vot;
  j["cot"] = r.cot;
  j["cotv"] = r.cotv;
  j["rho"] = r.rho;
  j["eta"] = r.eta;
  j["rho_upper_bound"] = number_or_null(r.rho_upper_bound);
  j["congestion_multiplier"] = r.congestion_multiplier;
  j["rho_from_components"] = number_or_null(r.rho_from_components);
  ojson d;
  d["lower"] = r.diagnostics.lower;
  d["truncation"] = r.diagnostics.truncation;
  d["quadrature_subdivisions"] = r.diagnostics.quadrature_subdivisions;
  d["quadrature_evaluations"] = r.diagnostics.quadrature_evaluations;
  d["root_iterations"] = r.diagnostics.root_iterations;
  d["root_residual"] = r.diagnostics.root_residual;
  for (const auto& [k, v] : r.diagnostics.values) d[k] = v;
  for (const auto& [k, v] : r.diagnostics.notes) d[k] = v;
  j["diagnostics"] = d;
  return j;
}

void check_report(const ValuationReport& r) {
  const std::pair<const char*, double> fields[] = {
      {"mu", r.mu},     {"cv", r.cv},   {"pi", r.pi},     {"vot_at_mu", r.vot_at_mu},
      {"vot", r.vot},   {"cot", r.cot}, {"cotv", r.cotv}, {"rho", r.rho},
      {"eta", r.eta},   {"congestion_multiplier", r.congestion_multiplier}};
  for (const auto& [name, v] : fields) check_finite(v, name);
  if (r.rho_upper_bound) check_finite(*r.rho_upper_bound, "rho_upper_bound");
  if (r.rho_from_components) check_finite(*r.rho_from_components, "rho_from_components");
  for (const auto& [name, v] : r.diagnostics.values) check_finite(v, name);
}

const std::vector<std::string>& report_columns() {
  static const std::vector<std::string> cols = {
      "framework", "method", "mu", "cv", "pi", "vot_at_mu", "vot", "cot", "cotv",
      "rho", "eta", "rho_upper_bound", "congestion_multiplier", "rho_from_components"};
  return cols;
}

std::vector<std::string> report_cells(const ValuationReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  return {r.framework,
          to_string(r.method),
          format_number(r.mu),
          format_number(r.cv),
          format_number(r.pi),
          format_number(r.vot_at_mu),
          format_number(r.vot),
          format_number(r.cot),
          format_number(r.cotv),
          format_number(r.rho),
          format_number(r.eta),
          opt(r.rho_upper_bound),
          format_number(r.congestion_multiplier),
          opt(r.rho_from_components)};
}

std::vector<Method> methods_of(const std::string& m) {
  if (m == "exact") return {Method::kExact};
  if (m == "second_order") return {Method::kSecondOrder};
  return {Method::kExact, Method::kSecondOrder};
}

template <class Fn>
auto named(const std::string& op, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::kConfigError) throw;
    throw Error(e.kind(), op + ": " + e.message());
  }
}

void set_path(json& root, const std::string& path, double value) {
  json* node = &root;
  std::stringstream ss(path);
  std::string seg;
  std::vector<std::string> segs;
  while (std::getline(ss, seg, '.')) segs.push_back(seg);
  if (segs.empty()) config_fail("sweep.axes", "empty path");
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string& s = segs[i];
    const bool last = i + 1 == segs.size();
    if (node->is_array()) {
      std::size_t idx = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), idx);
      if (ec != std::errc() || p != s.data() + s.size() || idx >= node->size()) {
        config_fail(path, "invalid array index '" + s + "'");
      }
      node = &(*node)[idx];
    } else {
      if (!node->is_object()) config_fail(path, "cannot descend into '" + s + "'");
      if (!last && !node->contains(s)) (*node)[s] = json::object();
      node = &(*node)[s];
    }
  }
  *node = value;
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface

std::string format_number(double x) {
  if (x == 0.0) return "0";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc()) raise(ErrorKind::kNonFinite, "number formatting failed");
  return std::string(buf, p);
}

ScenarioConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::kConfigError, std::string("config: parse error: ") + e.what());
  }
  return parse_config_json(root);
}

std::string canonical_config(const ScenarioConfig& config) {
  return config_json(config).dump();
}

ServiceTimeModel build_model(const DistributionSpec& s) {
  const ParamList& p = s.params;
  if (s.family == "degenerate") return ServiceTimeModel::degenerate(need(p, "value"));
  if (s.family == "exponential") return ServiceTimeModel::exponential(need(p, "rate"));
  if (s.family == "uniform") return ServiceTimeModel::uniform(need(p, "a"), need(p, "b"));
  if (s.family == "lognormal") {
    return ServiceTimeModel::lognormal(need(p, "log_mean"), need(p, "log_sd"));
  }
  if (s.family == "gamma") return ServiceTimeModel::gamma(need(p, "shape"), need(p, "rate"));
  if (s.family == "shift_scaled") {
    if (!s.base) raise(ErrorKind::kConfigError, "shift_scaled needs a base");
    return ServiceTimeModel::shift_scaled(build_model(*s.base), need(p, "shift"), need(p, "scale"));
  }
  if (s.family == "discrete") {
    return ServiceTimeModel::discrete(DiscreteInstance::from(s.outcomes, s.probabilities));
  }
  if (s.family == "dt_instance") return ServiceTimeModel::discrete(*build_instance(s));
  raise(ErrorKind::kConfigError, "unknown distribution family " + s.family);
}

std::optional<DiscreteInstance> build_instance(const DistributionSpec& s) {
  if (s.family != "dt_instance") return std::nullopt;
  const ParamList& p = s.params;
  return build_dt_instance(need(p, "T0"), s.xi, need(p, "p0"), need(p, "psi"),
                           param(p, "t_min"), param(p, "t_max"));
}

UtilityFunction build_utility(const PreferenceSpec& s) {
  const ParamList& p = s.params;
  UtilityFunction u = [&] {
    if (s.family == "quadratic") {
      return UtilityFunction::quadratic(need(p, "a"), need(p, "b"), need(p, "c"), s.interval);
    }
    if (s.family == "pure_quadratic") {
      return UtilityFunction::pure_quadratic(need(p, "a"), need(p, "c"), s.interval);
    }
    if (s.family == "power") return UtilityFunction::power(need(p, "k"), s.interval);
    if (s.family == "constant_prudence") {
      return UtilityFunction::constant_prudence(need(p, "r3"), s.interval, need(p, "c"), s.pin);
    }
    if (s.family == "affine") return UtilityFunction::affine(need(p, "m"), need(p, "c"), s.interval);
    raise(ErrorKind::kConfigError, "unknown preference family " + s.family);
  }();
  if (s.alpha != 1.0 || s.beta != 0.0) u = u.affine_transform(s.alpha, s.beta);
  return u;
}

WeightingFunction build_weighting(const WeightingSpec& s) {
  if (s.family == "identity") return WeightingFunction::identity();
  if (s.family == "power") return WeightingFunction::power(s.gamma);
  if (s.family == "inverse_s") return WeightingFunction::inverse_s(s.gamma);
  raise(ErrorKind::kConfigError, "unknown weighting family " + s.family);
}

ReportEnvelope run_scenario(const ScenarioConfig& c) {
  const auto start = std::chrono::steady_clock::now();
  ReportEnvelope env;
  ScenarioConfig echo = c;
  env.config_echo = canonical_config(echo);
  const ServiceTimeModel model = build_model(c.distribution);
  const std::optional<DiscreteInstance> instance = build_instance(c.distribution);
  const std::vector<Method> methods = methods_of(c.method);

  for (Method m : methods) {
    const std::string op = c.framework + "(" + to_string(m) + ")";
    ValuationReport r = named(op, [&] {
      if (c.framework == "eu") {
        return evaluate_eu(build_utility(c.preference), model, EconomicContext{c.phi, m});
      }
      const WeightingSpec& ws = *c.weighting;
      const WeightingFunction w = build_weighting(ws);
      if (c.framework == "dt") {
        const DtContext ctx{w, ws.p0, ws.psi};
        return instance ? dt_valuation(*instance, ctx, c.phi, m)
                        : dt_valuation(model, ctx, c.phi, m);
      }
      const RduContext ctx{build_utility(c.preference), w, ws.p0, ws.psi, ws.tau_h};
      return instance ? rdu_valuation(*instance, ctx, c.phi, m)
                      : rdu_valuation(model, ctx, c.phi, m);
    });
    check_report(r);
    env.reports.push_back(std::move(r));
  }

  if (env.reports.size() == 2) {
    env.cross_checks.push_back({"pi_exact_minus_second_order",
                                env.reports[0].pi - env.reports[1].pi});
    env.cross_checks.push_back({"rho_exact_minus_second_order",
                                env.reports[0].rho - env.reports[1].rho});
  }
  if (c.mc_samples >= 2) {
    const McEstimate mc = named("mc_estimate", [&] {
      return mc_estimate(make_sampler(model), statistic_mean(),
                         static_cast<std::size_t>(c.mc_samples), RngStream{c.seed, 0});
    });
    env.cross_checks.push_back({"mc_mean", mc.estimate});
    env.cross_checks.push_back({"mc_mean_std_error", mc.std_error});
    env.cross_checks.push_back({"mc_mean_minus_mu", mc.estimate - model.mean()});
  }
  for (const CrossCheck& x : env.cross_checks) check_finite(x.value, x.name);
  env.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return env;
}

std::string render_json(const ReportEnvelope& env) {
  ojson j;
  j["tool"] = env.tool;
  j["version"] = env.version;
  j["config"] = ojson::parse(env.config_echo);
  ojson reports = ojson::array();
  for (const ValuationReport& r : env.reports) reports.push_back(report_json(r));
  j["reports"] = reports;
  ojson checks = ojson::object();
  for (const CrossCheck& x : env.cross_checks) checks[x.name] = x.value;
  j["cross_checks"] = checks;
  if (env.wall_time_seconds) j["wall_time_seconds"] = *env.wall_time_seconds;
  return j.dump(2) + "\n";
}

std::string render_csv(const ReportEnvelope& env) {
  Table t;
  t.header = report_columns();
  for (const ValuationReport& r : env.reports) t.rows.push_back(report_cells(r));
  return render_csv(t);
}

std::string render_csv(const Table& table) {
  auto cell = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) {
      if (ch == '"') q += '"';
      q += ch;
    }
    return q + "\"";
  };
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cell(cells[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

std::string render_json(const Table& table) {
  ojson rows = ojson::array();
  for (const auto& r : table.rows) {
    ojson o;
    for (std::size_t i = 0; i < table.header.size(); ++i) o[table.header[i]] = r[i];
    rows.push_back(o);
  }
  return rows.dump(2) + "\n";
}

Table run_sweep(const ScenarioConfig& c) {
  if (!c.sweep) raise(ErrorKind::kConfigError, "sweep: block missing from config");
  const SweepSpec& s = *c.sweep;
  Table t;
  if (s.kind == "convergence") {
    const UtilityFunction u = build_utility(c.preference);
    const DiscreteInstance x = DiscreteInstance::from(s.x_outcomes, s.x_probabilities);
    const auto rows = named("approximation_convergence_study", [&] {
      return approximation_convergence_study(u, x, s.sigmas, s.mu);
    });
    t.header = {"sigma", "pi_exact", "pi_approx", "error", "scaled_error", "error_ratio",
                "scaled_ratio"};
    for (const ConvergenceRow& r : rows) {
      t.rows.push_back({format_number(r.sigma), format_number(r.pi_exact),
                        format_number(r.pi_approx), format_number(r.error),
                        format_number(r.scaled_error), format_number(r.error_ratio),
                        format_number(r.scaled_ratio)});
    }
    return t;
  }
  if (s.kind == "bound") {
    BoundSweepConfig bc;
    for (double a : s.a_values) {
      for (double b : s.b_values) bc.pairs.push_back({a, b});
    }
    for (const auto& [name, d] : s.models) bc.models.push_back({name, build_model(d)});
    const BoundSweepResult res = named("bound_sweep", [&] { return bound_sweep(bc); });
    t.header = {"model", "a", "b", "cv", "rho_exact", "bound", "slack", "eta", "r2r3cv2",
                "equality_row", "violation"};
    for (const BoundSweepRow& r : res.rows) {
      t.rows.push_back({r.model, format_number(r.a), format_number(r.b), format_number(r.cv),
                        format_number(r.rho_exact), format_number(r.bound),
                        format_number(r.slack), format_number(r.eta),
                        format_number(r.r2r3cv2), r.equality_row ? "1" : "0",
                        r.violation ? "violation" : ""});
    }
    return t;
  }

  const std::size_t total = grid_size(s.axes);
  if (total == 0) raise(ErrorKind::kConfigError, "sweep.axes: grid is empty");
  if (total > kMaxGridPoints) raise(ErrorKind::kGridTooLarge, "sweep grid too large");
  json base = config_json(c);
  base.erase("sweep");
  t.header = {"point"};
  for (const SweepAxis& a : s.axes) t.header.push_back(a.path);
  for (const std::string& col : report_columns()) t.header.push_back(col);
  std::vector<std::size_t> idx(s.axes.size(), 0);
  for (std::size_t point = 0; point < total; ++point) {
    json cfg = base;
    std::vector<std::string> lead = {std::to_string(point)};
    for (std::size_t k = 0; k < s.axes.size(); ++k) {
      const double v = s.axes[k].values[idx[k]];
      set_path(cfg, s.axes[k].path, v);
      lead.push_back(format_number(v));
    }
    const ScenarioConfig pc = parse_config_json(cfg);
    ScenarioConfig quiet = pc;
    quiet.mc_samples = 0;
    const ReportEnvelope env = run_scenario(quiet);
    for (const ValuationReport& r : env.reports) {
      std::vector<std::string> row = lead;
      for (std::string& cell : report_cells(r)) row.push_back(std::move(cell));
      t.rows.push_back(std::move(row));
    }
    for (std::size_t k = s.axes.size(); k-- > 0;) {
      if (++idx[k] < s.axes[k].values.size()) break;
      idx[k] = 0;
    }
  }
  return t;
}

std::string run_classify(const ScenarioConfig& c, const std::string& format) {
  if (c.framework == "dt") raise(ErrorKind::kConfigError, "classify: needs a utility preference");
  const UtilityFunction u = build_utility(c.preference);
  const ServiceTimeModel model = build_model(c.distribution);
  const double mu = model.mean();
  const RiskProfile rp = named("risk_coefficients", [&] { return risk_coefficients(u, mu); });
  std::string mv = "undefined", vs = "undefined";
  if (rp.R3) {
    const MomentPreference mp = classify_moment_preference(rp);
    mv = mp.mean_vs_variance;
    vs = mp.variance_vs_skewness;
  }
  const RraTradeoff rt = named("rra_tradeoff_check", [&] { return rra_tradeoff_check(u, mu); });
  Table t;
  t.header = {"at_time", "A2", "R2", "A3", "R3", "u3", "risk_averse", "prudent",
              "mean_vs_variance", "variance_vs_skewness", "rra_tradeoff_sign",
              "rra_tradeoff_consistent"};
  t.rows.push_back({format_number(rp.at_time), format_number(rp.A2), format_number(rp.R2),
                    rp.A3 ? format_number(*rp.A3) : "", rp.R3 ? format_number(*rp.R3) : "",
                    format_number(rp.u3), rp.risk_averse ? "true" : "false",
                    rp.prudent ? "true" : "false", mv, vs, std::to_string(rt.sign),
                    rt.consistent_with_r2 ? "true" : "false"});
  if (format == "csv") return render_csv(t);
  ojson j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = ojson::parse(canonical_config(c));
  ojson r;
  r["at_time"] = rp.at_time;
  r["A2"] = rp.A2;
  r["R2"] = rp.R2;
  r["A3"] = number_or_null(rp.A3);
  r["R3"] = number_or_null(rp.R3);
  r["u3"] = rp.u3;
  r["risk_averse"] = rp.risk_averse;
  r["prudent"] = rp.prudent;
  r["mean_vs_variance"] = mv;
  r["variance_vs_skewness"] = vs;
  r["rra_tradeoff_sign"] = rt.sign;
  r["rra_tradeoff_consistent"] = rt.consistent_with_r2;
  j["classification"] = r;
  return j.dump(2) + "\n";
}

std::string run_dualmoments(const ScenarioConfig& c, const std::string& format) {
  const ServiceTimeModel model = build_model(c.distribution);
  const std::optional<DiscreteInstance> inst = build_instance(c.distribution);
  std::vector<std::pair<std::string, double>> fields;
  const double mu = model.mean();
  fields.emplace_back("mu", mu);
  fields.emplace_back("variance", model.variance());
  fields.emplace_back("skewness", model.skewness());
  if (mu > 0.0) fields.emplace_back("cv", std::sqrt(model.variance()) / mu);
  fields.emplace_back("m2_dual_mean", named("dual_moment_mean", [&] { return dual_moment_mean(model); }));
  fields.emplace_back("m2_dual_var", named("dual_moment_variance", [&] { return dual_moment_variance(model); }));
  fields.emplace_back("truncation", model.truncation_point());
  if (c.mc_samples >= 2) {
    const McEstimate mc = named("mc_estimate", [&] {
      return mc_estimate(make_sampler(model), statistic_max_pair_excess(),
                         static_cast<std::size_t>(c.mc_samples), RngStream{c.seed, 1});
    });
    fields.emplace_back("mc_m2_dual_mean", mc.estimate);
    fields.emplace_back("mc_std_error", mc.std_error);
  }
  if (inst) {
    fields.emplace_back("discrete_formula_m2_dual", discrete_dual_moment(*inst));
    fields.emplace_back("brute_force_m2_dual", brute_force_max_pair_excess(*inst));
  }
  for (const auto& [k, v] : fields) check_finite(v, k);
  if (format == "csv") {
    Table t;
    for (const auto& [k, v] : fields) {
      t.header.push_back(k);
    }
    std::vector<std::string> row;
    for (const auto& [k, v] : fields) row.push_back(format_number(v));
    t.rows.push_back(row);
    return render_csv(t);
  }
  ojson j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;
  j["config"] = ojson::parse(canonical_config(c));
  ojson m;
  for (const auto& [k, v] : fields) m[k] = v;
  j["moments"] = m;
  return j.dump(2) + "\n";
}

}  // namespace cotv

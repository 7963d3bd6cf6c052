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

// cotv: scenario-driven valuation of service-time variability.

#include <cerrno>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "cotv/errors.hpp"
#include "cotv/scenario.hpp"
#include "cotv/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompute = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config_path;
  std::string out_path;
  std::string format;
  std::optional<std::uint64_t> seed;
  std::string method;
  bool timing = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) cotv::raise(cotv::ErrorKind::kConfigError, "cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("COTV_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (errno != 0 || *end != '\0' || s[0] == '-') {
    cotv::raise(cotv::ErrorKind::kConfigError, "COTV_SEED is not an unsigned 64-bit integer");
  }
  return static_cast<std::uint64_t>(v);
}

cotv::ScenarioConfig load(const CommonFlags& f) {
  cotv::ScenarioConfig c = cotv::parse_config(read_file(f.config_path));
  if (f.seed) {
    c.seed = *f.seed;
  } else if (auto s = env_seed()) {
    c.seed = *s;
  }
  if (!f.method.empty()) c.method = f.method;
  if (!f.format.empty()) c.output_format = f.format;
  return c;
}

void emit(const std::string& text, const CommonFlags& f, const cotv::ScenarioConfig* c) {
  std::string path = f.out_path;
  if (path.empty() && c) path = c->output_path;
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) cotv::raise(cotv::ErrorKind::kConfigError, "cannot write output file " + path);
  out << text;
}

int exit_code_for(const cotv::Error& e) {
  switch (e.kind()) {
    case cotv::ErrorKind::kConfigError:
    case cotv::ErrorKind::kGridTooLarge:
      return kExitConfig;
    default:
      return kExitCompute;
  }
}

std::string self_path(const char* argv0) {
  std::error_code ec;
  const auto p = std::filesystem::read_symlink("/proc/self/exe", ec);
  if (!ec) return p.string();
  return std::filesystem::absolute(argv0).string();
}

void add_config_flags(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config_path, "Scenario config (JSON)")->required();
  sub->add_option("--out", f.out_path, "Write output to this file instead of stdout");
  sub->add_option("--format", f.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--seed", f.seed, "RNG seed (falls back to COTV_SEED, then the config)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Valuation of service-time variability: premiums, cost ratios and benchmarks"};
  app.set_version_flag("--version", std::string(cotv::kToolVersion));
  app.require_subcommand(1);

  CommonFlags f;
  std::string profile = "quick";
  bool tamper = false;

  auto* value = app.add_subcommand("value", "Evaluate one scenario");
  add_config_flags(value, f);
  value->add_option("--method", f.method, "Valuation method")
      ->check(CLI::IsMember({"exact", "second_order", "both"}));
  value->add_flag("--timing", f.timing, "Include wall time in the report");

  auto* sweep = app.add_subcommand("sweep", "Run the sweep block of a scenario");
  add_config_flags(sweep, f);
  sweep->add_option("--method", f.method, "Valuation method")
      ->check(CLI::IsMember({"exact", "second_order", "both"}));

  auto* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--profile", profile, "quick (A1-A6) or full (A1-A10)")
      ->check(CLI::IsMember({"quick", "full"}));
  verify->add_option("--seed", f.seed, "Seed for randomized checks");
  verify->add_flag("--tamper", tamper, "Corrupt every tolerance (negative control)")
      ->group("");

  auto* classify = app.add_subcommand("classify", "Risk coefficients and moment-preference labels");
  add_config_flags(classify, f);

  auto* dual = app.add_subcommand("dualmoments", "Distribution and dual-moment diagnostics");
  add_config_flags(dual, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (verify->parsed()) {
      cotv::VerifyOptions opt;
      opt.profile = cotv::parse_profile(profile);
      if (f.seed) {
        opt.seed = *f.seed;
      } else if (auto s = env_seed()) {
        opt.seed = *s;
      }
      if (tamper) opt.tolerance_hook = [](const std::string&, double) { return -1.0; };
      opt.cli_path = self_path(argv[0]);
      const auto results = cotv::run_verify(opt);
      std::size_t passed = 0;
      for (const auto& r : results) {
        std::cout << cotv::format_check(r) << "\n";
        passed += r.pass ? 1 : 0;
      }
      std::cout << passed << "/" << results.size() << " criteria passed ("
                << cotv::to_string(opt.profile) << ")\n";
      return cotv::all_passed(results) ? kExitOk : kExitCompute;
    }

    const cotv::ScenarioConfig c = load(f);
    if (value->parsed()) {
      cotv::ReportEnvelope env = cotv::run_scenario(c);
      if (!f.timing) env.wall_time_seconds.reset();
      emit(c.output_format == "csv" ? cotv::render_csv(env) : cotv::render_json(env), f, &c);
    } else if (sweep->parsed()) {
      const cotv::Table t = cotv::run_sweep(c);
      emit(c.output_format == "json" && !f.format.empty() ? cotv::render_json(t)
                                                          : cotv::render_csv(t),
           f, &c);
    } else if (classify->parsed()) {
      emit(cotv::run_classify(c, c.output_format), f, &c);
    } else if (dual->parsed()) {
      emit(cotv::run_dualmoments(c, c.output_format), f, &c);
    }
    return kExitOk;
  } catch (const cotv::Error& e) {
    std::cerr << "cotv: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "cotv: " << e.what() << "\n";
    return kExitCompute;
  }
}

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

#ifndef COTV_VERIFY_HPP_
#define COTV_VERIFY_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cotv {

enum class Profile { kQuick, kFull };

std::string to_string(Profile p);
// ConfigError for anything other than "quick" or "full".
Profile parse_profile(const std::string& name);

struct CheckResult {
  std::string id;    // A1 ... A10
  std::string name;
  bool pass = false;
  std::string expected;
  std::string actual;
  double tolerance = 0.0;
  double seconds = 0.0;
  double time_limit = 0.0;
};

struct VerifyOptions {
  Profile profile = Profile::kQuick;
  std::uint64_t seed = 20240611;
  // Test hook: rewrites every tolerance before it is applied.
  std::function<double(const std::string& id, double tol)> tolerance_hook;
  // When set, the CLI determinism criterion runs this executable as a
  // subprocess; otherwise it runs the same pipeline in-process.
  std::optional<std::string> cli_path;
};

std::vector<std::string> criteria_ids(Profile p);
CheckResult run_criterion(const std::string& id, const VerifyOptions& options);
std::vector<CheckResult> run_verify(const VerifyOptions& options);

std::string format_check(const CheckResult& r);
bool all_passed(const std::vector<CheckResult>& results);

}  // namespace cotv

#endif  // COTV_VERIFY_HPP_

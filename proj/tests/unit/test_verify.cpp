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

#include <string>

#include <doctest.h>

#include "cotv/errors.hpp"
#include "cotv/verify.hpp"

using namespace cotv;

TEST_CASE("profiles select criteria") {
  CHECK(criteria_ids(Profile::kQuick) == std::vector<std::string>{"A1", "A2", "A3", "A4", "A5", "A6"});
  CHECK(criteria_ids(Profile::kFull).size() == 10);
  CHECK(parse_profile("full") == Profile::kFull);
  CHECK_THROWS_AS(parse_profile("slow"), Error);
  CHECK_THROWS_AS(run_criterion("A11", VerifyOptions{}), Error);
}

TEST_CASE("individual criteria that hold") {
  for (const char* id : {"A1", "A2", "A3", "A4", "A5", "A7", "A8", "A9"}) {
    const CheckResult r = run_criterion(id, VerifyOptions{});
    CAPTURE(r.actual);
    CHECK(r.id == id);
    CHECK(r.pass);
    CHECK(r.seconds <= r.time_limit);
    CHECK(!r.expected.empty());
  }
}

TEST_CASE("tolerance tampering turns passing criteria into failures") {
  VerifyOptions opt;
  opt.tolerance_hook = [](const std::string&, double) { return -1.0; };
  for (const char* id : {"A1", "A2", "A3", "A4", "A5", "A7", "A8", "A9"}) {
    CAPTURE(id);
    CHECK_FALSE(run_criterion(id, opt).pass);
  }
}

TEST_CASE("format_check prints one line with the verdict first") {
  CheckResult r;
  r.id = "A1";
  r.name = "x";
  r.pass = true;
  const std::string line = format_check(r);
  CHECK(line.rfind("PASS A1 x", 0) == 0);
  CHECK(line.find('\n') == std::string::npos);
}

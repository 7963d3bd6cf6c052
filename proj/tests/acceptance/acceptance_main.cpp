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

// Runs every acceptance criterion and prints one line per criterion.

#include <iostream>

#include "cotv/verify.hpp"

#ifndef COTV_CLI_PATH
#error "COTV_CLI_PATH must point at the cotv executable"
#endif

int main() {
  cotv::VerifyOptions opt;
  opt.profile = cotv::Profile::kFull;
  opt.cli_path = COTV_CLI_PATH;
  const auto results = cotv::run_verify(opt);
  for (const auto& r : results) std::cout << cotv::format_check(r) << "\n";
  return cotv::all_passed(results) ? 0 : 1;
}

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

#ifndef COTV_ERRORS_HPP_
#define COTV_ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cotv {

enum class ErrorKind {
  kNonConvergence,
  kNonFinite,
  kNoBracket,
  kUndefinedCV,
  kMetadataMissing,
  kMetadataMismatch,
  kInvalidMass,
  kNonZeroMean,
  kDerivativeZero,
  kUndefinedCoefficient,
  kDomainError,
  kZeroCOT,
  kNotQuadratic,
  kConfigError,
  kGridTooLarge,
};

std::string_view to_string(ErrorKind kind) noexcept;

// Every failure raised by the library. `what()` is "<Kind>: <message>".
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& message);

}  // namespace cotv

#endif  // COTV_ERRORS_HPP_

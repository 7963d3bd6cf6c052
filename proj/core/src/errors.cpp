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

#include "cotv/errors.hpp"

namespace cotv {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::kNonConvergence: return "NonConvergence";
    case ErrorKind::kNonFinite: return "NonFinite";
    case ErrorKind::kNoBracket: return "NoBracket";
    case ErrorKind::kUndefinedCV: return "UndefinedCV";
    case ErrorKind::kMetadataMissing: return "MetadataMissing";
    case ErrorKind::kMetadataMismatch: return "MetadataMismatch";
    case ErrorKind::kInvalidMass: return "InvalidMass";
    case ErrorKind::kNonZeroMean: return "NonZeroMean";
    case ErrorKind::kDerivativeZero: return "DerivativeZero";
    case ErrorKind::kUndefinedCoefficient: return "UndefinedCoefficient";
    case ErrorKind::kDomainError: return "DomainError";
    case ErrorKind::kZeroCOT: return "ZeroCOT";
    case ErrorKind::kNotQuadratic: return "NotQuadratic";
    case ErrorKind::kConfigError: return "ConfigError";
    case ErrorKind::kGridTooLarge: return "GridTooLarge";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      message_(message) {}

void raise(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace cotv

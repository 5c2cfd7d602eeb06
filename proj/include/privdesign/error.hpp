// Copyright 2026 The privdesign Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PRIVDESIGN_ERROR_HPP_
#define PRIVDESIGN_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace privdesign {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotNormalized,
  kNegativeMass,
  kNotStochastic,
  kZeroMarginal,
  kMixtureMismatch,
  kZeroSupport,
  kBudgetExceeded,
  kBudgetOrder,
  kTooFewLetters,
  kSupportViolation,
  kZeroReference,
  kNoConvergence,
  kSingular,
  kRankDeficient,
  kMaxIterations,
  kModeMismatch,
  kEpsilonTooLarge,
  kNoFeasibleAssignment,
  kLeakageViolated,
  kResidualCheckFailed,
  kNoFeasibleFilter,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotNormalized: return "NotNormalized";
    case ErrorCode::kNegativeMass: return "NegativeMass";
    case ErrorCode::kNotStochastic: return "NotStochastic";
    case ErrorCode::kZeroMarginal: return "ZeroMarginal";
    case ErrorCode::kMixtureMismatch: return "MixtureMismatch";
    case ErrorCode::kZeroSupport: return "ZeroSupport";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
    case ErrorCode::kBudgetOrder: return "BudgetOrder";
    case ErrorCode::kTooFewLetters: return "TooFewLetters";
    case ErrorCode::kSupportViolation: return "SupportViolation";
    case ErrorCode::kZeroReference: return "ZeroReference";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kSingular: return "Singular";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kMaxIterations: return "MaxIterations";
    case ErrorCode::kModeMismatch: return "ModeMismatch";
    case ErrorCode::kEpsilonTooLarge: return "EpsilonTooLarge";
    case ErrorCode::kNoFeasibleAssignment: return "NoFeasibleAssignment";
    case ErrorCode::kLeakageViolated: return "LeakageViolated";
    case ErrorCode::kResidualCheckFailed: return "ResidualCheckFailed";
    case ErrorCode::kNoFeasibleFilter: return "NoFeasibleFilter";
  }
  return "Unknown";
}

// Every failure raised by the library carries one of the codes above so that
// callers (the CLI in particular) can map it to a stable exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace privdesign

#endif  // PRIVDESIGN_ERROR_HPP_

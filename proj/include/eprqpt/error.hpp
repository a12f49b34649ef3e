// Copyright 2026 The eprqpt Authors
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

#ifndef EPRQPT_ERROR_HPP_
#define EPRQPT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace eprqpt {

enum class ErrorCode {
  kInvalidArgument,
  kDisconnectedGraph,
  kIsolatedState,
  kDuplicateLink,
  kDiagonalKinetic,
  kEmptyCavity,
  kEmptyReservoir,
  kNoConvergence,
  kInvalidMode,
  kNonFiniteWeight,
  kSignCollapse,
  kNonStoquasticRegion,
  kTruncationNotConverged,
  kBadDistribution,
  kSizeLimit,
  kParse,
  kInvariantViolation,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Single exception type for the library; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by iterative solvers; carries the best residual reached.
class NoConvergence : public Error {
 public:
  NoConvergence(const std::string& what, double best_residual)
      : Error(ErrorCode::kNoConvergence, what), best_residual_(best_residual) {}

  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_residual_;
};

}  // namespace eprqpt

#endif  // EPRQPT_ERROR_HPP_

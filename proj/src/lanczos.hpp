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

#ifndef EPRQPT_SRC_LANCZOS_HPP_
#define EPRQPT_SRC_LANCZOS_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "eprqpt/kernels.hpp"

namespace eprqpt::detail {

struct LanczosPair {
  double value = 0.0;
  std::vector<double> vector;
  double residual = 0.0;
  std::size_t matvecs = 0;
};

/// Lowest eigenpair of H restricted to the orthogonal complement of
/// `deflate` (orthonormal vectors). Fully reorthogonalized Lanczos with
/// explicit restarts from the current Ritz vector.
LanczosPair lanczos_lowest(const kernels::CsrView& h, std::vector<double> start,
                           std::span<const std::vector<double>> deflate,
                           double tolerance, std::size_t max_matvecs,
                           std::size_t krylov_dim = 80);

/// Deterministic start vector: ones plus a small fixed pseudo-random
/// perturbation so that no symmetry sector is missed.
std::vector<double> default_start(std::size_t n, std::uint64_t salt);

/// Flips the sign so the first entry above 1e-10 * max|x| is positive.
void normalize_sign(std::span<double> x);

}  // namespace eprqpt::detail

#endif  // EPRQPT_SRC_LANCZOS_HPP_

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

#include "lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "eprqpt/error.hpp"
#include "eprqpt/rng.hpp"

namespace eprqpt::detail {

namespace {

void project_out(std::span<const std::vector<double>> basis, std::span<double> w) {
  for (const auto& q : basis) kernels::axpy(-kernels::dot(q, w), q, w);
}

}  // namespace

std::vector<double> default_start(std::size_t n, std::uint64_t salt) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(mix64(salt * 0x9e3779b97f4a7c15ULL + i) >> 11) *
                     0x1.0p-53;
    v[i] = 1.0 + 0.1 * (u - 0.5);
  }
  return v;
}

void normalize_sign(std::span<double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  for (double v : x) {
    if (std::abs(v) > 1e-10 * peak) {
      if (v < 0.0) kernels::scale(-1.0, x);
      return;
    }
  }
}

LanczosPair lanczos_lowest(const kernels::CsrView& h, std::vector<double> start,
                           std::span<const std::vector<double>> deflate,
                           double tolerance, std::size_t max_matvecs,
                           std::size_t krylov_dim) {
  const std::size_t n = h.diag.size();
  const std::size_t free_dim = n - deflate.size();
  krylov_dim = std::max<std::size_t>(2, std::min(krylov_dim, free_dim));

  LanczosPair best;
  best.residual = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> q;
  std::vector<double> alpha, beta, w(n), y(n), hy(n);

  project_out(deflate, start);
  double nrm = kernels::norm2(start);
  if (!(nrm > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Lanczos start vector vanishes after deflation");
  }

  std::size_t matvecs = 0;
  while (true) {
    q.clear();
    alpha.clear();
    beta.clear();
    kernels::scale(1.0 / nrm, start);
    q.push_back(start);

    Eigen::VectorXd ritz;
    double theta = 0.0;
    bool invariant = false;
    for (std::size_t j = 0; j < krylov_dim; ++j) {
      kernels::spmv(h, q[j], w);
      ++matvecs;
      project_out(deflate, w);
      const double a = kernels::dot(q[j], w);
      alpha.push_back(a);
      // Two passes of classical Gram-Schmidt against the whole basis.
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& qi : q) kernels::axpy(-kernels::dot(qi, w), qi, w);
        project_out(deflate, w);
      }
      const double b = kernels::norm2(w);

      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
      Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), std::ssize(alpha));
      Eigen::VectorXd e = beta.empty() ? Eigen::VectorXd()
                                       : Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(
                                             beta.data(), std::ssize(beta)));
      tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
      theta = tri.eigenvalues()(0);
      ritz = tri.eigenvectors().col(0);
      const double estimate = b * std::abs(ritz(ritz.size() - 1));

      invariant = b <= 1e-14 * std::max(1.0, std::abs(theta));
      if (invariant || estimate <= 0.1 * tolerance || j + 1 == krylov_dim ||
          q.size() == free_dim || matvecs >= max_matvecs) {
        break;
      }
      beta.push_back(b);
      kernels::scale(1.0 / b, w);
      q.push_back(w);
    }

    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) kernels::axpy(ritz(static_cast<Eigen::Index>(i)), q[i], y);
    project_out(deflate, y);
    kernels::scale(1.0 / kernels::norm2(y), y);
    kernels::spmv(h, y, hy);
    ++matvecs;
    project_out(deflate, hy);
    const double value = kernels::dot(y, hy);
    kernels::axpy(-value, y, hy);
    const double residual = kernels::norm2(hy);

    if (residual < best.residual) {
      best.value = value;
      best.vector = y;
      best.residual = residual;
    }
    best.matvecs = matvecs;
    if (residual <= tolerance) return best;
    if (matvecs >= max_matvecs) {
      throw NoConvergence("Lanczos did not reach residual " + std::to_string(tolerance) +
                              " within " + std::to_string(max_matvecs) + " products",
                          best.residual);
    }
    (void)invariant;
    start = y;
    nrm = 1.0;
  }
}

}  // namespace eprqpt::detail

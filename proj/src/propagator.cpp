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

// e^{-Ht} v. Small systems go through one cached symmetric
// eigendecomposition; large ones through Lanczos-Krylov time stepping with
// the usual a posteriori error estimate beta * h_{m+1,m} * |[e^{-T dt} e_1]_m|.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "eprqpt/error.hpp"
#include "eprqpt/spectral.hpp"

namespace eprqpt {

struct Propagator::Impl {
  const Hamiltonian* h = nullptr;
  double rtol = 1e-11;
  bool dense = false;
  Eigen::MatrixXd vectors;
  Eigen::VectorXd values;

  std::vector<double> apply_dense(std::span<const double> v0, double t) const {
    const Eigen::Map<const Eigen::VectorXd> v(v0.data(), static_cast<Eigen::Index>(v0.size()));
    Eigen::VectorXd c = vectors.transpose() * v;
    for (Eigen::Index k = 0; k < c.size(); ++k) c(k) *= std::exp(-values(k) * t);
    const Eigen::VectorXd out = vectors * c;
    return {out.data(), out.data() + out.size()};
  }

  std::vector<double> apply_krylov(std::span<const double> v0, double t) const;
};

std::vector<double> Propagator::Impl::apply_krylov(std::span<const double> v0,
                                                   double t) const {
  const std::size_t n = v0.size();
  const std::size_t m_max = std::min<std::size_t>(40, n);
  const auto csr = h->csr();
  std::vector<double> w(v0.begin(), v0.end());
  std::vector<std::vector<double>> q;
  std::vector<double> alpha, beta, work(n);

  const double norm_h = std::max(h->norm_bound(), 1e-300);
  double done = 0.0;
  double dt = std::min(t, 10.0 / norm_h);
  std::size_t guard = 0;
  while (done < t) {
    if (++guard > 1000000) {
      throw NoConvergence("Krylov propagation step size collapsed", 0.0);
    }
    const double b0 = kernels::norm2(w);
    if (b0 == 0.0) return w;

    q.assign(1, w);
    kernels::scale(1.0 / b0, q[0]);
    alpha.clear();
    beta.clear();
    double h_next = 0.0;
    for (std::size_t j = 0; j < m_max; ++j) {
      kernels::spmv(csr, q[j], work);
      alpha.push_back(kernels::dot(q[j], work));
      for (int pass = 0; pass < 2; ++pass) {
        for (const auto& qi : q) kernels::axpy(-kernels::dot(qi, work), qi, work);
      }
      h_next = kernels::norm2(work);
      if (h_next <= 1e-13 * norm_h || j + 1 == m_max) break;
      beta.push_back(h_next);
      kernels::scale(1.0 / h_next, work);
      q.push_back(work);
    }
    const bool exact = h_next <= 1e-13 * norm_h || q.size() == n;

    const auto m = static_cast<Eigen::Index>(alpha.size());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), m);
    Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), m - 1))
                              : Eigen::VectorXd();
    tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& s = tri.eigenvectors();
    const Eigen::VectorXd first = s.row(0).transpose();

    auto small_exp = [&](double tau) {
      Eigen::VectorXd c = first;
      for (Eigen::Index k = 0; k < m; ++k) c(k) *= std::exp(-tri.eigenvalues()(k) * tau);
      return Eigen::VectorXd(s * c);
    };

    double step = exact ? t - done : std::min(dt, t - done);
    Eigen::VectorXd y = small_exp(step);
    if (!exact) {
      while (true) {
        const double err = h_next * std::abs(y(m - 1));
        if (err <= rtol * y.norm() || step < 1e-14 * t) break;
        step *= 0.5;
        y = small_exp(step);
      }
    }
    std::fill(w.begin(), w.end(), 0.0);
    for (Eigen::Index k = 0; k < m; ++k) kernels::axpy(b0 * y(k), q[static_cast<std::size_t>(k)], w);
    done += step;
    dt = step * 1.5;
  }
  return w;
}

Propagator::Propagator(const Hamiltonian& h, EigenMethod method, double relative_tolerance)
    : impl_(std::make_unique<Impl>()) {
  impl_->h = &h;
  impl_->rtol = relative_tolerance;
  impl_->dense = method == EigenMethod::kDense ||
                 (method == EigenMethod::kAuto && h.dimension() <= kDenseLimit);
  if (impl_->dense) {
    const auto m = static_cast<Eigen::Index>(h.dimension());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
    for (StateId n = 0; n < h.dimension(); ++n) {
      a(n, n) = h.potential(n);
      const auto nb = h.neighbors(n);
      const auto kv = h.kinetic_row(n);
      for (std::size_t k = 0; k < nb.size(); ++k) a(n, nb[k]) = kv[k];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    impl_->values = solver.eigenvalues();
    impl_->vectors = solver.eigenvectors();
  }
}

Propagator::~Propagator() = default;
Propagator::Propagator(Propagator&&) noexcept = default;
Propagator& Propagator::operator=(Propagator&&) noexcept = default;

bool Propagator::dense() const noexcept { return impl_->dense; }

std::vector<double> Propagator::apply(std::span<const double> v0, double t) const {
  if (v0.size() != impl_->h->dimension()) {
    throw Error(ErrorCode::kInvalidArgument, "vector size does not match the Hamiltonian");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidArgument, "propagation time must be finite and >= 0");
  }
  if (t == 0.0) return {v0.begin(), v0.end()};
  return impl_->dense ? impl_->apply_dense(v0, t) : impl_->apply_krylov(v0, t);
}

std::vector<double> propagator_apply(const Hamiltonian& h, std::span<const double> v0,
                                     double t) {
  return Propagator(h).apply(v0, t);
}

}  // namespace eprqpt

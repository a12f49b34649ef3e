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

#include "eprqpt/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eprqpt/error.hpp"
#include "lanczos.hpp"

namespace eprqpt {

namespace {

Eigen::MatrixXd dense_matrix(const Hamiltonian& h) {
  const auto m = static_cast<Eigen::Index>(h.dimension());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (StateId n = 0; n < h.dimension(); ++n) {
    a(n, n) = h.potential(n);
    const auto nb = h.neighbors(n);
    const auto kv = h.kinetic_row(n);
    for (std::size_t k = 0; k < nb.size(); ++k) a(n, nb[k]) = kv[k];
  }
  return a;
}

double residual_of(const Hamiltonian& h, std::span<const double> v, double e) {
  std::vector<double> hv(v.size());
  kernels::spmv(h.csr(), v, hv);
  kernels::axpy(-e, v, hv);
  return kernels::norm2(hv);
}

}  // namespace

SpectralResult ground_state(const Hamiltonian& h, const EigenOptions& options) {
  const std::size_t m = h.dimension();
  const double tol =
      options.tolerance > 0.0 ? options.tolerance : 1e-10 * std::max(h.norm_bound(), 1e-300);
  SpectralResult out;
  out.gap_energy = std::numeric_limits<double>::infinity();

  const bool dense = options.method == EigenMethod::kDense ||
                     (options.method == EigenMethod::kAuto && m <= kDenseLimit) || m <= 2;
  if (dense) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense_matrix(h));
    if (solver.info() != Eigen::Success) {
      throw NoConvergence("dense eigensolver failed", std::numeric_limits<double>::infinity());
    }
    out.energy = solver.eigenvalues()(0);
    if (m > 1) out.gap_energy = solver.eigenvalues()(1);
    const Eigen::VectorXd v = solver.eigenvectors().col(0);
    out.ground_vector.assign(v.data(), v.data() + v.size());
  } else {
    detail::LanczosPair g = detail::lanczos_lowest(h.csr(), detail::default_start(m, 1), {},
                                                   tol, options.max_matvecs);
    out.energy = g.value;
    out.ground_vector = std::move(g.vector);
    out.matvecs = g.matvecs;
    if (options.compute_gap) {
      std::vector<std::vector<double>> deflate{out.ground_vector};
      detail::LanczosPair e1 = detail::lanczos_lowest(
          h.csr(), detail::default_start(m, 2), deflate, tol, options.max_matvecs);
      out.gap_energy = e1.value;
      out.matvecs += e1.matvecs;
    }
  }
  detail::normalize_sign(out.ground_vector);
  out.residual = residual_of(h, out.ground_vector, out.energy);
  out.degenerate = out.gap_energy - out.energy <= tol;

  const auto v = h.potential();
  const double v_min = *std::min_element(v.begin(), v.end());
  if (out.energy > v_min + 10.0 * tol) {
    throw Error(ErrorCode::kInvariantViolation,
                "ground energy " + std::to_string(out.energy) + " above min V " +
                    std::to_string(v_min));
  }
  return out;
}

PartitionEnergies partition_energies(const Hamiltonian& h, const Partition& p,
                                     const EigenOptions& options) {
  PartitionEnergies e{.reservoir = restrict_to(h, p.reservoir),
                      .cavity = restrict_to(h, p.cavity),
                      .reservoir_state = {},
                      .cavity_state = {}};
  e.reservoir_state = ground_state(e.reservoir.hamiltonian, options);
  e.cavity_state = ground_state(e.cavity.hamiltonian, options);
  e.reservoir_energy = e.reservoir_state.energy;
  e.cavity_energy = e.cavity_state.energy;
  e.reservoir_gap_energy = e.reservoir_state.gap_energy;
  e.cavity_gap_energy = e.cavity_state.gap_energy;
  return e;
}

std::string_view phase_name(Phase phase) noexcept {
  switch (phase) {
    case Phase::kNormal:
      return "normal";
    case Phase::kFrozen:
      return "frozen";
    case Phase::kCritical:
      return "critical";
  }
  return "unknown";
}

TheoremPrediction theorem_prediction(double reservoir_energy, double cavity_energy,
                                     double size_parameter, double critical_tolerance) {
  TheoremPrediction t;
  t.reservoir_density = reservoir_energy / size_parameter;
  t.cavity_density = cavity_energy / size_parameter;
  t.energy_density = std::min(t.reservoir_density, t.cavity_density);
  if (std::abs(t.reservoir_density - t.cavity_density) <= critical_tolerance) {
    t.phase = Phase::kCritical;
  } else {
    t.phase = t.reservoir_density <= t.cavity_density ? Phase::kNormal : Phase::kFrozen;
  }
  return t;
}

namespace {

// C_n = (sum_n' <n'|E>) <E|n> for every boundary state of one side.
std::vector<std::pair<StateId, double>> overlap_constants(
    const Restriction& side, const SpectralResult& state, std::span<const StateId> boundary) {
  const auto& v = state.ground_vector;
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  std::vector<std::pair<StateId, double>> out;
  out.reserve(boundary.size());
  for (StateId n : boundary) {
    const auto it = std::lower_bound(side.ids.begin(), side.ids.end(), n);
    out.emplace_back(n, total * v[static_cast<std::size_t>(it - side.ids.begin())]);
  }
  return out;
}

double amplitude(const Restriction& side, const SpectralResult& state, StateId n) {
  const auto it = std::lower_bound(side.ids.begin(), side.ids.end(), n);
  return state.ground_vector[static_cast<std::size_t>(it - side.ids.begin())];
}

}  // namespace

CavityCouplingReport coupling_report(const Hamiltonian& h, const Partition& p,
                                     const PartitionEnergies& e) {
  CavityCouplingReport r;
  r.overlap_reservoir = overlap_constants(e.reservoir, e.reservoir_state, p.reservoir_boundary);
  r.overlap_cavity = overlap_constants(e.cavity, e.cavity_state, p.cavity_boundary);

  std::vector<double> c_tilde(h.dimension(), 0.0);
  std::vector<double> c_bar(h.dimension(), 0.0);
  for (const auto& [n, c] : r.overlap_reservoir) c_tilde[n] = c;
  for (const auto& [n, c] : r.overlap_cavity) c_bar[n] = c;

  double weight = 0.0;
  double simple = 0.0;
  double cavity_sum = 0.0;
  for (StateId n : p.cavity_boundary) {
    const double a = amplitude(e.cavity, e.cavity_state, n);
    const double w = a * a;
    weight += w;
    simple += w * (p.r_out_plus[n] - p.r_out_minus[n]);
    double q = 0.0;
    const auto nb = h.neighbors(n);
    const auto kv = h.kinetic_row(n);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (!p.contains(nb[k])) q += kv[k] * c_tilde[nb[k]];
    }
    cavity_sum += w * q;
  }
  r.kout_simple = weight > 0.0 ? -simple / weight : 0.0;
  r.cavity_average = weight > 0.0 ? cavity_sum / weight : 0.0;

  double res_weight = 0.0;
  double res_sum = 0.0;
  for (StateId n : p.reservoir_boundary) {
    const double a = amplitude(e.reservoir, e.reservoir_state, n);
    const double w = a * a;
    res_weight += w;
    double q = 0.0;
    const auto nb = h.neighbors(n);
    const auto kv = h.kinetic_row(n);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (p.contains(nb[k])) q += kv[k] * c_bar[nb[k]];
    }
    res_sum += w * q / p.r_out[n];
  }
  r.reservoir_average = res_weight > 0.0 ? res_sum / res_weight : 0.0;
  r.kout_boundary = -r.cavity_average * r.reservoir_average;
  return r;
}

CavityCouplingReport coupling_report(const Hamiltonian& h, const Partition& p) {
  return coupling_report(h, p, partition_energies(h, p));
}

ExitRateResult exit_rate_hamiltonian(const Hamiltonian& h, const Partition& p,
                                     const EigenOptions& options) {
  const Restriction star = star_hamiltonian(h, p, StarPotential::kTotalDegree);
  const Restriction star2 = star_hamiltonian(h, p, StarPotential::kInternalDegree);
  ExitRateResult r;
  r.star_state = ground_state(star.hamiltonian, options);
  r.e_star = r.star_state.energy;
  r.e_star_gap = r.star_state.gap_energy;
  r.star_norm = star.hamiltonian.norm_bound();
  EigenOptions opt2 = options;
  opt2.compute_gap = false;
  r.e_star_star = ground_state(star2.hamiltonian, opt2).energy;

  if (std::abs(r.e_star_star) > 1e-10 * std::max(r.star_norm, 1e-300)) {
    throw Error(ErrorCode::kInvariantViolation,
                "E** = " + std::to_string(r.e_star_star) + " is not zero");
  }
  if (p.cavity_out_weight() > 0.0 && !(r.e_star > 0.0)) {
    throw Error(ErrorCode::kInvariantViolation,
                "E* = " + std::to_string(r.e_star) + " not positive");
  }
  return r;
}

}  // namespace eprqpt

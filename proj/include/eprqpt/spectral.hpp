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

// Exact linear-algebra oracle: extremal eigenpairs, e^{-Ht} v, cavity and
// reservoir energies, boundary overlap constants, K_out estimators and the
// first-exit decay rate E*.

#ifndef EPRQPT_SPECTRAL_HPP_
#define EPRQPT_SPECTRAL_HPP_

#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "eprqpt/fock.hpp"

namespace eprqpt {

/// Lowest eigenpair plus the first excited energy.
struct SpectralResult {
  double energy = 0.0;
  /// First excited energy; +inf for a one-state system.
  double gap_energy = 0.0;
  std::vector<double> ground_vector;  // unit norm, first significant entry > 0
  double residual = 0.0;              // ||H v - E v||_2
  std::size_t matvecs = 0;
  bool degenerate = false;  // gap_energy - energy <= tolerance
};

enum class EigenMethod { kAuto, kDense, kLanczos };

/// Sizes up to this use the dense path under kAuto.
inline constexpr std::size_t kDenseLimit = 1024;

struct EigenOptions {
  /// Absolute residual tolerance; <= 0 selects 1e-10 * norm_bound().
  double tolerance = 0.0;
  std::size_t max_matvecs = 200000;
  EigenMethod method = EigenMethod::kAuto;
  bool compute_gap = true;
};

/// Throws NoConvergence when the Lanczos path exhausts max_matvecs.
SpectralResult ground_state(const Hamiltonian& h, const EigenOptions& options = {});

/// Caches whatever is reusable across many e^{-Ht} v evaluations on the same
/// Hamiltonian (the eigendecomposition on the dense path).
class Propagator {
 public:
  explicit Propagator(const Hamiltonian& h, EigenMethod method = EigenMethod::kAuto,
                      double relative_tolerance = 1e-11);
  ~Propagator();
  Propagator(Propagator&&) noexcept;
  Propagator& operator=(Propagator&&) noexcept;

  /// e^{-H t} v0, t >= 0.
  std::vector<double> apply(std::span<const double> v0, double t) const;

  bool dense() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::vector<double> propagator_apply(const Hamiltonian& h, std::span<const double> v0,
                                     double t);

struct PartitionEnergies {
  double reservoir_energy = 0.0;  // E~
  double cavity_energy = 0.0;     // E-bar
  double reservoir_gap_energy = 0.0;
  double cavity_gap_energy = 0.0;
  Restriction reservoir;
  Restriction cavity;
  SpectralResult reservoir_state;
  SpectralResult cavity_state;
};

PartitionEnergies partition_energies(const Hamiltonian& h, const Partition& p,
                                     const EigenOptions& options = {});

enum class Phase { kNormal, kFrozen, kCritical };

std::string_view phase_name(Phase phase) noexcept;

struct TheoremPrediction {
  double energy_density = 0.0;  // min(e~, e-bar)
  double reservoir_density = 0.0;
  double cavity_density = 0.0;
  Phase phase = Phase::kNormal;
};

/// Energies are extensive; densities are energy / size_parameter.
TheoremPrediction theorem_prediction(double reservoir_energy, double cavity_energy,
                                     double size_parameter, double critical_tolerance = 1e-9);

struct CavityCouplingReport {
  std::vector<std::pair<StateId, double>> overlap_reservoir;  // C~_n on the reservoir boundary
  std::vector<std::pair<StateId, double>> overlap_cavity;     // C-bar_n on the cavity boundary
  /// -<R_out^+ - R_out^-> over the cavity boundary, weighted by |<n|E-bar>|^2.
  double kout_simple = 0.0;
  /// Product of the two boundary averages of K C~ and K C-bar / R~_out.
  double kout_boundary = 0.0;
  double cavity_average = 0.0;
  double reservoir_average = 0.0;
};

CavityCouplingReport coupling_report(const Hamiltonian& h, const Partition& p,
                                     const PartitionEnergies& energies);
CavityCouplingReport coupling_report(const Hamiltonian& h, const Partition& p);

struct ExitRateResult {
  double e_star = 0.0;        // ground energy of H*
  double e_star_gap = 0.0;    // first excited energy of H*
  double e_star_star = 0.0;   // ground energy with V = R_in
  double star_norm = 0.0;     // norm bound of H*
  SpectralResult star_state;
};

/// Throws kInvariantViolation if E** is not zero to 1e-10 ||H*|| or if
/// E* <= 0 while the cavity has out-links.
ExitRateResult exit_rate_hamiltonian(const Hamiltonian& h, const Partition& p,
                                     const EigenOptions& options = {});

/// E-bar + pibar * K_out.
inline double finite_size_prediction(double cavity_energy, double pibar, double kout) {
  return cavity_energy + pibar * kout;
}

}  // namespace eprqpt

#endif  // EPRQPT_SPECTRAL_HPP_

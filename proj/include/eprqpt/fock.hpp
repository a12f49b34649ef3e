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

// Finite Fock spaces, lattice Hamiltonians H = K + V and their embedded
// Markov chain, plus cavity/reservoir partitions with boundary bookkeeping.
//
// States are dense 0-based ids. Every off-diagonal entry is stored as a
// link (n, n', lambda, eta) with K(n, n') = -lambda * eta, lambda = +-1 and
// eta > 0. From these follow the active-link count A(n), the weighted degree
// R(n) = sum_n' |K(n, n')|, the transition kernel P(n, n') = |K(n, n')| / R(n)
// and its invariant measure pi(n) = R(n) / sum R.

#ifndef EPRQPT_FOCK_HPP_
#define EPRQPT_FOCK_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eprqpt/kernels.hpp"

namespace eprqpt {

using StateId = std::uint32_t;

/// Input triplet: value is the signed matrix element K(i, j).
struct LinkSpec {
  StateId i;
  StateId j;
  double value;
};

/// Validation applied at construction.
enum class Validation {
  kErgodic,  // connected, no isolated state (the EPR preconditions)
  kRelaxed,  // restricted sub-Hamiltonians; isolation/disconnection recorded
};

class Hamiltonian {
 public:
  /// Builds and validates. Throws Error with kDisconnectedGraph,
  /// kIsolatedState, kDuplicateLink, kDiagonalKinetic or kInvalidArgument.
  static Hamiltonian build(std::size_t dimension, double size_parameter,
                           std::vector<double> potential,
                           std::span<const LinkSpec> links,
                           Validation validation = Validation::kErgodic);

  std::size_t dimension() const noexcept { return potential_.size(); }
  /// Extensivity scale N (energy densities are E / N).
  double size_parameter() const noexcept { return size_parameter_; }

  std::span<const double> potential() const noexcept { return potential_; }
  double potential(StateId n) const noexcept { return potential_[n]; }

  std::span<const StateId> neighbors(StateId n) const noexcept {
    return {cols_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
  }
  std::span<const double> etas(StateId n) const noexcept {
    return {eta_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
  }
  std::span<const std::int8_t> signs(StateId n) const noexcept {
    return {lambda_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
  }
  /// Matrix entries K(n, .) aligned with neighbors(n).
  std::span<const double> kinetic_row(StateId n) const noexcept {
    return {kvalue_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
  }
  /// K(n, m); zero when not linked.
  double kinetic(StateId n, StateId m) const noexcept;

  std::uint32_t active_links(StateId n) const noexcept {
    return offsets_[n + 1] - offsets_[n];
  }
  double weighted_degree(StateId n) const noexcept { return weighted_degree_[n]; }
  std::span<const double> weighted_degrees() const noexcept { return weighted_degree_; }

  /// Number of unordered links.
  std::size_t link_count() const noexcept { return cols_.size() / 2; }
  /// All links with i < j, value = K(i, j), ascending by (i, j).
  std::vector<LinkSpec> links() const;

  bool connected() const noexcept { return connected_; }
  bool bipartite() const noexcept { return bipartite_; }
  std::span<const StateId> isolated_states() const noexcept { return isolated_; }
  /// All lambda = +1 (every trajectory weight is positive).
  bool stoquastic() const noexcept { return stoquastic_; }

  /// max_n (|V(n)| + R(n)), an upper bound on the spectral norm.
  double norm_bound() const noexcept { return norm_bound_; }

  kernels::CsrView csr() const noexcept {
    return {potential_, offsets_, cols_, kvalue_};
  }

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  Hamiltonian() = default;

  double size_parameter_ = 1.0;
  std::vector<double> potential_;
  std::vector<StateId> offsets_;
  std::vector<StateId> cols_;
  std::vector<double> eta_;
  std::vector<std::int8_t> lambda_;
  std::vector<double> kvalue_;
  std::vector<double> weighted_degree_;
  std::vector<StateId> isolated_;
  bool connected_ = false;
  bool bipartite_ = false;
  bool stoquastic_ = true;
  double norm_bound_ = 0.0;
  std::vector<std::string> warnings_;
};

inline Hamiltonian build_hamiltonian(std::size_t dimension, double size_parameter,
                                     std::vector<double> potential,
                                     std::span<const LinkSpec> links) {
  return Hamiltonian::build(dimension, size_parameter, std::move(potential), links);
}

/// Row-stochastic kernel sharing the CSR layout of the Hamiltonian.
struct TransitionKernel {
  std::vector<StateId> offsets;
  std::vector<StateId> cols;
  std::vector<double> probabilities;

  std::size_t dimension() const noexcept { return offsets.size() - 1; }
  double operator()(StateId n, StateId m) const noexcept;
  std::span<const double> row(StateId n) const noexcept {
    return {probabilities.data() + offsets[n], offsets[n + 1] - offsets[n]};
  }
};

TransitionKernel transition_kernel(const Hamiltonian& h);

/// pi(n) = R(n) / sum R. Verifies stationarity against the kernel and the
/// pointwise bound pi(n) * M * min R <= R(n); throws kInvariantViolation
/// when either fails.
std::vector<double> invariant_measure(const Hamiltonian& h);

/// || pi^T P - pi^T ||_inf.
double stationarity_residual(const TransitionKernel& p, std::span<const double> pi);

struct LevelDensity {
  std::vector<double> levels;   // strictly ascending
  std::vector<double> weights;  // > 0, sum to 1
  std::vector<std::uint32_t> level_of_state;  // 0-based level index per state
};

inline constexpr double kLevelMergeTolerance = 1e-12;

LevelDensity level_density(const Hamiltonian& h);

struct Partition {
  std::vector<StateId> cavity;     // sorted
  std::vector<StateId> reservoir;  // sorted
  std::vector<StateId> cavity_boundary;
  std::vector<StateId> reservoir_boundary;
  std::vector<std::uint8_t> in_cavity;  // mask, size M

  // Per-state splits relative to the state's own side.
  std::vector<std::uint32_t> a_in;
  std::vector<std::uint32_t> a_out;
  std::vector<double> r_in;
  std::vector<double> r_out;
  // Out-link weights split by sign: lambda = +1 and lambda = -1.
  std::vector<double> r_out_plus;
  std::vector<double> r_out_minus;

  double pbar = 0.0;   // |cavity| / M
  double pibar = 0.0;  // sum_{cavity} R / sum R
  bool cavity_connected = false;
  bool reservoir_connected = false;

  bool contains(StateId n) const noexcept { return in_cavity[n] != 0; }
  /// sum_{n in cavity} R_out(n).
  double cavity_out_weight() const noexcept;
};

/// Arbitrary cavity. Throws kEmptyCavity / kEmptyReservoir /
/// kInvalidArgument (out of range or duplicate ids).
Partition make_partition(const Hamiltonian& h, std::span<const StateId> cavity_ids);

/// Cavity = all states on potential level `level` (1-based, ascending).
Partition cavity_from_level(const Hamiltonian& h, std::size_t level);

enum class IsolatedPolicy { kReport, kThrow };

struct Restriction {
  Hamiltonian hamiltonian;
  std::vector<StateId> ids;  // local index -> global id
  std::vector<StateId> isolated;  // global ids that lost every link
};

/// Keeps the links internal to `ids`. A single state is always legal (its
/// energy is V(n)). With kThrow, any isolated state in a multi-state
/// restriction raises kIsolatedState.
Restriction restrict_to(const Hamiltonian& h, std::span<const StateId> ids,
                        IsolatedPolicy policy = IsolatedPolicy::kReport);

enum class StarPotential {
  kTotalDegree,     // V*(n) = R(n)
  kInternalDegree,  // V**(n) = R_in(n): annihilates the uniform vector
};

/// Sign-free cavity Hamiltonian: matrix entries -eta on internal links and
/// the chosen degree on the diagonal.
Restriction star_hamiltonian(const Hamiltonian& h, const Partition& p,
                             StarPotential potential = StarPotential::kTotalDegree);

}  // namespace eprqpt

#endif  // EPRQPT_FOCK_HPP_

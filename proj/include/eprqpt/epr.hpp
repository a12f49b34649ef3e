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

// Exact probabilistic representation of e^{-Ht}.
//
// A trajectory is a continuous-time walk on the kinetic graph. For every
// horizon t the stochastic functional
//
//   M[0,t) = exp( int_0^t [c(n_s)] ds ) * prod_k w_k * lambda_k
//
// has expectation sum_n <n| e^{-Ht} |n0>. Two clock choices are supported:
//
//   kLinkRate  one Poisson clock per link with rate eta: hold time ~ Exp(R(n)),
//              next state with probability eta / R, c(n) = R(n) - V(n), w_k = 1.
//   kUniform   one clock per link with a common rate rho: hold time ~
//              Exp(rho A(n)), next state uniform, c(n) = rho A(n) - V(n),
//              w_k = eta_k / rho.
//
// Log-weights are accumulated by summation by parts,
//   int_0^t c ds = c(n_current) * t + sum_k (c_{k-1} - c_k) s_k,
// which is exact whenever c is constant along the path.

#ifndef EPRQPT_EPR_HPP_
#define EPRQPT_EPR_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eprqpt/fock.hpp"
#include "eprqpt/rng.hpp"

namespace eprqpt {

enum class ClockMode { kLinkRate, kUniform };

struct SamplingMode {
  ClockMode clock = ClockMode::kLinkRate;
  double rho = 0.0;  // kUniform only, > 0

  static SamplingMode link_rate() { return {}; }
  static SamplingMode uniform(double rho) { return {ClockMode::kUniform, rho}; }
};

std::string mode_name(const SamplingMode& mode);
/// "link" or "uniform:<rho>"; "uniform" alone uses rho = max eta of `h`.
SamplingMode parse_mode(std::string_view text, const Hamiltonian& h);

struct Trajectory {
  StateId start = 0;
  double horizon = 0.0;
  std::vector<double> jump_times;  // strictly ascending in (0, horizon)
  std::vector<StateId> states;     // start, then one per jump
  int sign = 1;
  double log_weight = 0.0;

  std::size_t jumps() const noexcept { return jump_times.size(); }
  /// Holding times, the last one being the residual horizon - s_N.
  std::vector<double> living_times() const;
};

Trajectory sample_trajectory(const Hamiltonian& h, StateId start, double horizon,
                             Stream& rng, const SamplingMode& mode = {});

/// Log-weight recomputed from states and times by direct interval sums.
double recompute_log_weight(const Hamiltonian& h, const Trajectory& path,
                            const SamplingMode& mode = {});

struct EprConfig {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  SamplingMode mode;
};

struct EprEstimate {
  double time = 0.0;
  std::size_t samples = 0;
  double mean = 0.0;       // E(M[0,t)); may overflow to inf for huge t
  double std_error = 0.0;
  double mean_sign = 0.0;
  double log_mean = 0.0;   // log |mean|, finite even when mean overflows
  double relative_error = 0.0;  // std_error / |mean|
  SamplingMode mode;
};

EprEstimate estimate_propagator_sum(const Hamiltonian& h, StateId start, double t,
                                    const EprConfig& config);

struct EprSeries {
  std::vector<EprEstimate> points;
  /// Covariance of log |mean| between grid points (same trajectories feed
  /// every horizon), row-major size G x G.
  std::vector<double> log_covariance;
};

/// One set of trajectories evaluated at every horizon of an ascending grid.
EprSeries estimate_propagator_series(const Hamiltonian& h, StateId start,
                                     std::span<const double> t_grid, const EprConfig& config);

struct GroundEnergyEstimate {
  double energy = 0.0;
  double std_error = 0.0;
  EprSeries series;
  double curvature = 0.0;        // quadratic coefficient of -log mean vs t
  double curvature_error = 0.0;
  bool curvature_warning = false;
  double min_abs_sign = 1.0;
};

inline constexpr double kSignCollapseThreshold = 0.01;

/// Weighted least-squares slope of -log E(M) over the grid (>= 3 points).
/// Throws kSignCollapse when |mean sign| < 0.01 at any grid point.
GroundEnergyEstimate estimate_ground_energy(const Hamiltonian& h, StateId start,
                                            std::span<const double> t_grid,
                                            const EprConfig& config);

// ---------------------------------------------------------------------------
// First exit from a cavity.

struct ExitSample {
  double tau = 0.0;
  StateId exit_state = 0;   // last cavity state before leaving
  StateId entered = 0;      // first reservoir state
  bool censored = false;    // tau > t_max; tau is then t_max
};

/// Runs the link-rate chain from `start` (inside the cavity) until its first
/// jump out of it.
ExitSample sample_first_exit(const Hamiltonian& h, const Partition& p, StateId start,
                             Stream& rng, double t_max);

/// min over the cavity boundary of R_out, the slowest single-state escape.
double exit_rate_lower_bound(const Partition& p);
/// 50 / exit_rate_lower_bound.
double default_exit_horizon(const Partition& p);

struct ExitRunConfig {
  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
  double t_max = 0.0;  // <= 0 picks default_exit_horizon
};

std::vector<ExitSample> sample_exit_times(const Hamiltonian& h, const Partition& p,
                                          StateId start, const ExitRunConfig& config);

struct ExitRateFit {
  double rate = 0.0;
  double std_error = 0.0;
  double tail_start = 0.0;
  std::size_t tail_events = 0;
  std::size_t censored = 0;
  double mean_tau = 0.0;  // over uncensored samples
};

/// Censored maximum-likelihood exponential rate of tau - tail_start over the
/// samples with tau > tail_start.
ExitRateFit fit_exit_tail(std::span<const ExitSample> samples, double tail_start);

struct Histogram {
  double bin_width = 0.0;
  std::vector<double> edges;    // size bins + 1
  std::vector<std::size_t> counts;
  std::vector<double> density;  // counts / (total * width)
};

Histogram exit_histogram(std::span<const ExitSample> samples, std::size_t bins, double t_max);

// ---------------------------------------------------------------------------
// Exit balance: E(M[0,tau)) for the first exit tau before t equals
// int_0^t sum_{n in boundary} R_out(n) [e^{-H-bar x}]_{n, n0} dx.

struct LemmaCheck {
  double lhs = 0.0;
  double lhs_error = 0.0;
  double rhs = 0.0;
  double exit_fraction = 0.0;  // trajectories that left before t
  bool agree = false;          // |lhs - rhs| <= 3 lhs_error
};

/// Throws kNonStoquasticRegion if any link touching the cavity has
/// lambda = -1, kInvalidArgument if start is not in the cavity.
LemmaCheck check_exit_lemma(const Hamiltonian& h, const Partition& p, StateId start,
                            double t, const EprConfig& config);

/// The deterministic right-hand side alone (adaptive Gauss-Kronrod, relative
/// tolerance 1e-8).
double exit_lemma_rhs(const Hamiltonian& h, const Partition& p, StateId start, double t);

// ---------------------------------------------------------------------------
// Cavity-reservoir series of E(M[0,t)):
//   e^{-E~ t} sum_k (-K_out pibar)^k int_{x_1+..+x_k <= t} e^{(E~ - E-bar) sum x} dx
// with Q_t(k) = pibar^k for k >= 1 and Q_t(0) = (1 - 2 pibar) / (1 - pibar).

struct SeriesValue {
  double log_abs = 0.0;
  int sign = 1;
  std::size_t terms = 0;
  double last_term_ratio = 0.0;  // |last term| / |partial sum|
};

/// Throws kTruncationNotConverged when the last of kmax terms is still above
/// 1e-12 of the partial sum.
SeriesValue series_reconstruction(double reservoir_energy, double cavity_energy, double pibar,
                                  double kout, double t, std::size_t kmax = 400);

/// -d/dt log of the series by a central difference.
double series_energy(double reservoir_energy, double cavity_energy, double pibar, double kout,
                     double t, double dt = 1e-3, std::size_t kmax = 400);

/// int_0^t e^{a s} s^{k-1} / (k-1)! ds scaled by e^{-max(a,0) t}, k >= 1.
double simplex_integral_scaled(double a, double t, std::size_t k);

}  // namespace eprqpt

#endif  // EPRQPT_EPR_HPP_

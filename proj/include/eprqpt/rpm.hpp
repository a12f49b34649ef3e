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

// Random Potential Model in the large-N limit. All quantities are energy
// densities (energy / N). The ground density e solves
//
//   sum_l p_l / (e - v_l) = 1 / e0,   e < v_1,
//
// with e0 < 0 the density of the free (zero potential) ground state.

#ifndef EPRQPT_RPM_HPP_
#define EPRQPT_RPM_HPP_

#include <vector>

#include "eprqpt/fock.hpp"
#include "eprqpt/spectral.hpp"

namespace eprqpt {

struct RpmSpec {
  std::vector<double> levels;   // strictly ascending
  std::vector<double> weights;  // > 0, sum 1 within 1e-12
  double e0free = -1.0;         // < 0

  /// Throws kBadDistribution or kInvalidArgument.
  void validate() const;
};

/// Level histogram of a Hamiltonian in density units (V / N), with weights
/// renormalized to sum exactly to 1.
RpmSpec empirical_spec(const Hamiltonian& h, double e0free);

/// The root on (-inf, v_1), by bisection to full double resolution in the
/// shifted variable e - v_1.
double solve_e1f(const RpmSpec& spec);

/// |sum_l p_l / (e - v_l) - 1/e0| * |e0|.
double e1f_residual(const RpmSpec& spec, double e);

/// Two levels: x^2 - (d + e0) x + p1 e0 d = 0, d = v2 - v1, x = e - v1 <= 0.
double two_level_closed_form(double v1, double v2, double p1, double e0free);

/// p1 -> 0 limit of the two-level density: v1 + min(0, v2 - v1 + e0).
double two_level_dilute_limit(double v1, double v2, double e0free);

struct CriticalCondition {
  double w = 0.0;       // sum_{l >= 2} p_l / (v_1 - v_l), weights as given
  double target = 0.0;  // 1 / e0
  bool critical = false;
};

CriticalCondition critical_condition(const RpmSpec& spec, double tol = 1e-9);

struct DilutePhase {
  double e_tilde = 0.0;  // reservoir density, levels 2..m renormalized
  double energy = 0.0;   // min(e_tilde, v_1)
  Phase phase = Phase::kNormal;
};

DilutePhase predict_phase_dilute(const RpmSpec& spec, double tol = 1e-9);

/// The free density e0 at which the dilute reservoir density equals v_1:
/// 1 / sum_{l >= 2} p~_l / (v_1 - v_l) with p~ renormalized over l >= 2. For a
/// hypercube with transverse field gamma, e0 = -gamma, so gamma_c = -result.
double dilute_critical_e0(const RpmSpec& spec);

}  // namespace eprqpt

#endif  // EPRQPT_RPM_HPP_

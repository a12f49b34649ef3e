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

#include "eprqpt/rpm.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "eprqpt/error.hpp"

namespace eprqpt {

void RpmSpec::validate() const {
  if (levels.empty() || levels.size() != weights.size()) {
    throw Error(ErrorCode::kBadDistribution, "levels and weights must be nonempty and equal length");
  }
  for (std::size_t l = 0; l < levels.size(); ++l) {
    if (!std::isfinite(levels[l]) || (l > 0 && !(levels[l] > levels[l - 1]))) {
      throw Error(ErrorCode::kBadDistribution, "levels must be finite and strictly ascending");
    }
    if (!(weights[l] > 0.0)) throw Error(ErrorCode::kBadDistribution, "weights must be > 0");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kBadDistribution, fmt::format("weights sum to {:.17g}, not 1", total));
  }
  if (!(e0free < 0.0) || !std::isfinite(e0free)) {
    throw Error(ErrorCode::kInvalidArgument, "e0free must be finite and < 0");
  }
}

RpmSpec empirical_spec(const Hamiltonian& h, double e0free) {
  const LevelDensity d = level_density(h);
  RpmSpec s;
  s.e0free = e0free;
  for (double v : d.levels) s.levels.push_back(v / h.size_parameter());
  s.weights = d.weights;
  const double total = std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
  for (double& w : s.weights) w /= total;
  return s;
}

namespace {

// sum_l p_l / (x - d_l) - 1/e0 with d_l = v_l - v_1 >= 0.
double shifted_f(const RpmSpec& s, double x) {
  double acc = 0.0;
  for (std::size_t l = 0; l < s.levels.size(); ++l) {
    acc += s.weights[l] / (x - (s.levels[l] - s.levels[0]));
  }
  return acc - 1.0 / s.e0free;
}

double solve_shifted(const RpmSpec& s) {
  double lo = -std::abs(s.e0free) - 1.0;
  double hi = -1e-14;
  while (shifted_f(s, lo) < 0.0) lo *= 2.0;
  if (shifted_f(s, hi) >= 0.0) return hi;
  while (true) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (shifted_f(s, mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(shifted_f(s, lo)) <= std::abs(shifted_f(s, hi)) ? lo : hi;
}

}  // namespace

double solve_e1f(const RpmSpec& spec) {
  spec.validate();
  return spec.levels.front() + solve_shifted(spec);
}

double e1f_residual(const RpmSpec& spec, double e) {
  double acc = 0.0;
  for (std::size_t l = 0; l < spec.levels.size(); ++l) acc += spec.weights[l] / (e - spec.levels[l]);
  return std::abs(acc - 1.0 / spec.e0free) * std::abs(spec.e0free);
}

double two_level_closed_form(double v1, double v2, double p1, double e0free) {
  if (!(v1 < v2) || !(p1 > 0.0 && p1 < 1.0) || !(e0free < 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "need v1 < v2, 0 < p1 < 1, e0free < 0");
  }
  const double d = v2 - v1;
  const double b = -(d + e0free);
  const double c = p1 * e0free * d;  // < 0: one root of each sign
  const double q = -0.5 * (b + std::copysign(std::sqrt(b * b - 4.0 * c), b));
  const double r1 = q;
  const double r2 = c / q;
  return v1 + std::min(r1, r2);
}

double two_level_dilute_limit(double v1, double v2, double e0free) {
  return v1 + std::min(0.0, v2 - v1 + e0free);
}

CriticalCondition critical_condition(const RpmSpec& spec, double tol) {
  spec.validate();
  if (spec.levels.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two levels");
  CriticalCondition c;
  for (std::size_t l = 1; l < spec.levels.size(); ++l) {
    c.w += spec.weights[l] / (spec.levels[0] - spec.levels[l]);
  }
  c.target = 1.0 / spec.e0free;
  c.critical = std::abs(c.w - c.target) <= tol;
  return c;
}

namespace {

RpmSpec reservoir_spec(const RpmSpec& spec) {
  RpmSpec r;
  r.e0free = spec.e0free;
  const double rest = 1.0 - spec.weights[0];
  for (std::size_t l = 1; l < spec.levels.size(); ++l) {
    r.levels.push_back(spec.levels[l]);
    r.weights.push_back(spec.weights[l] / rest);
  }
  const double total = std::accumulate(r.weights.begin(), r.weights.end(), 0.0);
  for (double& w : r.weights) w /= total;
  return r;
}

}  // namespace

DilutePhase predict_phase_dilute(const RpmSpec& spec, double tol) {
  spec.validate();
  if (spec.levels.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two levels");
  DilutePhase out;
  out.e_tilde = solve_e1f(reservoir_spec(spec));
  const double v1 = spec.levels.front();
  out.energy = std::min(out.e_tilde, v1);
  if (std::abs(out.e_tilde - v1) <= tol) {
    out.phase = Phase::kCritical;
  } else {
    out.phase = out.e_tilde < v1 ? Phase::kNormal : Phase::kFrozen;
  }
  return out;
}

double dilute_critical_e0(const RpmSpec& spec) {
  spec.validate();
  if (spec.levels.size() < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two levels");
  const RpmSpec r = reservoir_spec(spec);
  double w = 0.0;
  for (std::size_t l = 0; l < r.levels.size(); ++l) w += r.weights[l] / (spec.levels[0] - r.levels[l]);
  return 1.0 / w;
}

}  // namespace eprqpt

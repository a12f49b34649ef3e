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

// The k-fold simplex integral of e^{a (x_1 + .. + x_k)} over
// x_1 + .. + x_k <= t collapses to one dimension through the density of the
// sum, s^{k-1} / (k-1)!, and is then done by adaptive Gauss-Kronrod.

#include <fmt/format.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "eprqpt/epr.hpp"
#include "eprqpt/error.hpp"

namespace eprqpt {

double simplex_integral_scaled(double a, double t, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "simplex order must be >= 1");
  if (!(t >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "t must be >= 0");
  if (t == 0.0) return 0.0;
  const double kd = static_cast<double>(k);
  if (a == 0.0) return std::exp(kd * std::log(t) - std::lgamma(kd + 1.0));
  const double ap = std::max(a, 0.0);
  if (k == 1) {
    // (e^{a t} - 1) / a times e^{-a+ t}, written without cancellation.
    return a > 0.0 ? -std::expm1(-a * t) / a : std::expm1(a * t) / a;
  }
  const double lg = std::lgamma(kd);
  auto f = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(a * s - ap * t + (kd - 1.0) * std::log(s) - lg);
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(f, 0.0, t, 25, 1e-13);
}

SeriesValue series_reconstruction(double reservoir_energy, double cavity_energy, double pibar,
                                  double kout, double t, std::size_t kmax) {
  if (kmax < 1) throw Error(ErrorCode::kInvalidArgument, "kmax must be >= 1");
  if (!(pibar >= 0.0 && pibar < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "pibar must lie in [0, 1)");
  }
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidArgument, "t must be finite and >= 0");
  }
  const double a = reservoir_energy - cavity_energy;
  const double ap = std::max(a, 0.0);
  const double x = -kout * pibar;
  const double q0 = (1.0 - 2.0 * pibar) / (1.0 - pibar);

  // Terms kept as (log |T_k|, sign) so large t or |x| cannot overflow.
  std::vector<double> log_term;
  std::vector<int> sign_term;
  log_term.push_back(q0 == 0.0 ? -std::numeric_limits<double>::infinity()
                               : std::log(std::abs(q0)) - ap * t);
  sign_term.push_back(q0 < 0.0 ? -1 : 1);

  auto partial = [&](double& log_abs, int& sign) {
    double peak = -std::numeric_limits<double>::infinity();
    for (double l : log_term) peak = std::max(peak, l);
    double s = 0.0;
    for (std::size_t k = 0; k < log_term.size(); ++k) {
      if (std::isfinite(log_term[k])) s += sign_term[k] * std::exp(log_term[k] - peak);
    }
    sign = s < 0.0 ? -1 : 1;
    log_abs = std::log(std::abs(s)) + peak;
  };

  SeriesValue out;
  double log_sum = 0.0;
  int sign = 1;
  if (x == 0.0 || t == 0.0) {
    partial(log_sum, sign);
    out.terms = 1;
  } else {
    const double log_x = std::log(std::abs(x));
    bool converged = false;
    for (std::size_t k = 1; k <= kmax; ++k) {
      const double j = simplex_integral_scaled(a, t, k);
      const double lt = j > 0.0 ? static_cast<double>(k) * log_x + std::log(j)
                                : -std::numeric_limits<double>::infinity();
      log_term.push_back(lt);
      sign_term.push_back(x < 0.0 && (k % 2 == 1) ? -1 : 1);
      partial(log_sum, sign);
      out.last_term_ratio = std::exp(lt - log_sum);
      const bool decreasing = lt < log_term[k - 1] || !std::isfinite(lt);
      if (decreasing && out.last_term_ratio <= 1e-12) {
        converged = true;
        out.terms = k + 1;
        break;
      }
    }
    if (!converged) {
      throw Error(ErrorCode::kTruncationNotConverged,
                  fmt::format("series not converged after {} terms (last/partial = {:.3g})",
                              kmax, out.last_term_ratio));
    }
  }
  out.log_abs = -reservoir_energy * t + ap * t + log_sum;
  out.sign = sign;
  return out;
}

double series_energy(double reservoir_energy, double cavity_energy, double pibar, double kout,
                     double t, double dt, std::size_t kmax) {
  if (!(dt > 0.0) || t - dt < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "need 0 < dt <= t");
  }
  const SeriesValue lo =
      series_reconstruction(reservoir_energy, cavity_energy, pibar, kout, t - dt, kmax);
  const SeriesValue hi =
      series_reconstruction(reservoir_energy, cavity_energy, pibar, kout, t + dt, kmax);
  return -(hi.log_abs - lo.log_abs) / (2.0 * dt);
}

}  // namespace eprqpt

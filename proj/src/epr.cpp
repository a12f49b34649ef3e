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

#include "eprqpt/epr.hpp"

#include <fmt/format.h>

#include <Eigen/Dense>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "eprqpt/error.hpp"
#include "walker.hpp"

namespace eprqpt {

std::string mode_name(const SamplingMode& mode) {
  if (mode.clock == ClockMode::kLinkRate) return "link";
  return fmt::format("uniform:{}", mode.rho);
}

SamplingMode parse_mode(std::string_view text, const Hamiltonian& h) {
  if (text == "link" || text == "link-rate") return SamplingMode::link_rate();
  if (text == "uniform") {
    double rho = 0.0;
    for (StateId n = 0; n < h.dimension(); ++n) {
      for (double eta : h.etas(n)) rho = std::max(rho, eta);
    }
    return SamplingMode::uniform(rho);
  }
  constexpr std::string_view prefix = "uniform:";
  if (text.starts_with(prefix)) {
    const std::string_view num = text.substr(prefix.size());
    double rho = 0.0;
    const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), rho);
    if (ec == std::errc() && ptr == num.data() + num.size() && rho > 0.0 && std::isfinite(rho)) {
      return SamplingMode::uniform(rho);
    }
  }
  throw Error(ErrorCode::kInvalidMode, fmt::format("unknown sampling mode '{}'", text));
}

std::vector<double> Trajectory::living_times() const {
  std::vector<double> out;
  out.reserve(jump_times.size() + 1);
  double prev = 0.0;
  for (double s : jump_times) {
    out.push_back(s - prev);
    prev = s;
  }
  out.push_back(horizon - prev);
  return out;
}

Trajectory sample_trajectory(const Hamiltonian& h, StateId start, double horizon, Stream& rng,
                             const SamplingMode& mode) {
  detail::check_walk_arguments(h, start, horizon, mode);
  const detail::Clock clock(h, mode);
  Trajectory path;
  path.start = start;
  path.horizon = horizon;
  path.states.push_back(start);

  detail::Walker w(clock, start);
  while (true) {
    const double next = w.next_jump(rng);
    if (next >= horizon) break;
    w.jump(rng);
    path.jump_times.push_back(next);
    path.states.push_back(w.state());
  }
  path.sign = w.sign();
  path.log_weight = w.log_weight(horizon);
  return path;
}

double recompute_log_weight(const Hamiltonian& h, const Trajectory& path,
                            const SamplingMode& mode) {
  const detail::Clock clock(h, mode);
  const std::vector<double> delta = path.living_times();
  double integral = 0.0;
  double jumps = 0.0;
  for (std::size_t k = 0; k < delta.size(); ++k) {
    integral += clock.drift(path.states[k]) * delta[k];
    if (k > 0) jumps += clock.log_jump_factor(path.states[k - 1], path.states[k]);
  }
  return integral + jumps;
}

namespace {

// Sufficient statistics of G correlated functionals, each stored relative to
// its own running maximum log-weight.
class Moments {
 public:
  explicit Moments(std::size_t g)
      : shift_(g, -std::numeric_limits<double>::infinity()),
        sum_(g, 0.0),
        sign_sum_(g, 0.0),
        cross_(g * g, 0.0),
        x_(g, 0.0) {}

  std::size_t size() const noexcept { return shift_.size(); }

  // sign = 0 records a zero-weight sample.
  void add(std::span<const double> log_weight, std::span<const int> sign) {
    const std::size_t g = size();
    for (std::size_t i = 0; i < g; ++i) {
      if (sign[i] != 0 && log_weight[i] > shift_[i]) rescale(i, log_weight[i]);
    }
    for (std::size_t i = 0; i < g; ++i) {
      x_[i] = sign[i] == 0 ? 0.0 : sign[i] * std::exp(log_weight[i] - shift_[i]);
      sum_[i] += x_[i];
      sign_sum_[i] += sign[i];
    }
    for (std::size_t i = 0; i < g; ++i) {
      if (x_[i] == 0.0) continue;
      double* row = cross_.data() + i * g;
      for (std::size_t j = 0; j < g; ++j) row[j] += x_[i] * x_[j];
    }
    ++count_;
  }

  void merge(const Moments& other) {
    const std::size_t g = size();
    for (std::size_t i = 0; i < g; ++i) {
      if (other.shift_[i] > shift_[i]) rescale(i, other.shift_[i]);
    }
    std::vector<double> f(g);
    for (std::size_t i = 0; i < g; ++i) {
      f[i] = std::isinf(other.shift_[i]) ? 0.0 : std::exp(other.shift_[i] - shift_[i]);
      sum_[i] += f[i] * other.sum_[i];
      sign_sum_[i] += other.sign_sum_[i];
    }
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) {
        cross_[i * g + j] += f[i] * f[j] * other.cross_[i * g + j];
      }
    }
    count_ += other.count_;
  }

  EprEstimate estimate(std::size_t i, double t, const SamplingMode& mode) const {
    EprEstimate e;
    e.time = t;
    e.samples = count_;
    e.mode = mode;
    if (count_ == 0) return e;
    const double n = static_cast<double>(count_);
    const double m = sum_[i] / n;
    const double var = variance_of_mean(i, i);
    const double se = std::sqrt(var);
    e.mean_sign = sign_sum_[i] / n;
    if (m == 0.0) {
      e.log_mean = -std::numeric_limits<double>::infinity();
      e.std_error = se * std::exp(shift_[i]);
      e.relative_error = std::numeric_limits<double>::infinity();
      return e;
    }
    e.log_mean = std::log(std::abs(m)) + shift_[i];
    e.mean = m * std::exp(shift_[i]);
    e.std_error = se * std::exp(shift_[i]);
    e.relative_error = se / std::abs(m);
    return e;
  }

  // Covariance of log |mean_i| and log |mean_j| to first order.
  double log_covariance(std::size_t i, std::size_t j) const {
    const double n = static_cast<double>(count_);
    const double mi = sum_[i] / n;
    const double mj = sum_[j] / n;
    if (mi == 0.0 || mj == 0.0) return std::numeric_limits<double>::infinity();
    return variance_of_mean(i, j) / (mi * mj);
  }

 private:
  void rescale(std::size_t i, double new_shift) {
    const std::size_t g = size();
    const double f = std::isinf(shift_[i]) ? 0.0 : std::exp(shift_[i] - new_shift);
    shift_[i] = new_shift;
    sum_[i] *= f;
    for (std::size_t j = 0; j < g; ++j) {
      cross_[i * g + j] *= f;
      cross_[j * g + i] *= f;
    }
  }

  double variance_of_mean(std::size_t i, std::size_t j) const {
    if (count_ < 2) return 0.0;
    const std::size_t g = size();
    const double n = static_cast<double>(count_);
    const double mi = sum_[i] / n;
    const double mj = sum_[j] / n;
    const double c = (cross_[i * g + j] / n - mi * mj) / (n - 1.0);
    return i == j ? std::max(c, 0.0) : c;
  }

  std::vector<double> shift_;
  std::vector<double> sum_;
  std::vector<double> sign_sum_;
  std::vector<double> cross_;
  std::vector<double> x_;
  std::size_t count_ = 0;
};

void check_grid(std::span<const double> t_grid) {
  if (t_grid.empty()) throw Error(ErrorCode::kInvalidArgument, "empty time grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (!(t_grid[i] > 0.0) || !std::isfinite(t_grid[i]) || (i > 0 && t_grid[i] <= t_grid[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument,
                  "time grid must be finite, positive and strictly ascending");
    }
  }
}

Moments run_series(const Hamiltonian& h, StateId start, std::span<const double> t_grid,
                   const EprConfig& config) {
  const detail::Clock clock(h, config.mode);
  const std::size_t g = t_grid.size();
  return detail::parallel_reduce<Moments>(
      config.samples, config.workers, [g] { return Moments(g); },
      [&](Moments& acc, std::size_t worker, std::size_t first, std::size_t count) {
        std::vector<double> lw(g);
        std::vector<int> sg(g);
        for (std::size_t k = 0; k < count; ++k) {
          Stream rng(config.seed, worker, first + k);
          detail::Walker w(clock, start);
          for (std::size_t i = 0; i < g; ++i) {
            while (w.next_jump(rng) < t_grid[i]) w.jump(rng);
            lw[i] = w.log_weight(t_grid[i]);
            sg[i] = w.sign();
            if (!std::isfinite(lw[i])) {
              throw Error(ErrorCode::kNonFiniteWeight,
                          fmt::format("non-finite log-weight at t = {}", t_grid[i]));
            }
          }
          acc.add(lw, sg);
        }
      },
      [](Moments& into, const Moments& part) { into.merge(part); });
}

}  // namespace

EprSeries estimate_propagator_series(const Hamiltonian& h, StateId start,
                                     std::span<const double> t_grid, const EprConfig& config) {
  check_grid(t_grid);
  detail::check_walk_arguments(h, start, t_grid.back(), config.mode);
  if (config.samples == 0) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");
  const Moments m = run_series(h, start, t_grid, config);
  const std::size_t g = t_grid.size();
  EprSeries out;
  for (std::size_t i = 0; i < g; ++i) out.points.push_back(m.estimate(i, t_grid[i], config.mode));
  out.log_covariance.resize(g * g);
  for (std::size_t i = 0; i < g; ++i) {
    for (std::size_t j = 0; j < g; ++j) out.log_covariance[i * g + j] = m.log_covariance(i, j);
  }
  return out;
}

EprEstimate estimate_propagator_sum(const Hamiltonian& h, StateId start, double t,
                                    const EprConfig& config) {
  const double grid[] = {t};
  return estimate_propagator_series(h, start, grid, config).points.front();
}

GroundEnergyEstimate estimate_ground_energy(const Hamiltonian& h, StateId start,
                                            std::span<const double> t_grid,
                                            const EprConfig& config) {
  if (t_grid.size() < 3) {
    throw Error(ErrorCode::kInvalidArgument, "ground-energy fit needs at least 3 grid points");
  }
  GroundEnergyEstimate out;
  out.series = estimate_propagator_series(h, start, t_grid, config);
  const auto& pts = out.series.points;
  const std::size_t g = pts.size();
  for (const auto& p : pts) {
    out.min_abs_sign = std::min(out.min_abs_sign, std::abs(p.mean_sign));
    if (std::abs(p.mean_sign) < kSignCollapseThreshold || !(p.mean > 0.0)) {
      throw Error(ErrorCode::kSignCollapse,
                  fmt::format("mean sign {} at t = {}", p.mean_sign, p.time));
    }
  }

  // Ordinary least squares y = a + E t on y = -log mean. The points share
  // trajectories, so the error uses the full covariance: var = w^T C w.
  const auto& cov = out.series.log_covariance;
  auto quad_form = [&](const std::vector<double>& w) {
    double v = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
      for (std::size_t j = 0; j < g; ++j) v += w[i] * cov[i * g + j] * w[j];
    }
    return std::max(v, 0.0);
  };

  double tbar = 0.0;
  for (const auto& p : pts) tbar += p.time;
  tbar /= static_cast<double>(g);
  double sxx = 0.0;
  for (const auto& p : pts) sxx += (p.time - tbar) * (p.time - tbar);
  std::vector<double> w(g);
  out.energy = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    w[i] = (pts[i].time - tbar) / sxx;
    out.energy += w[i] * -pts[i].log_mean;
  }
  out.std_error = std::sqrt(quad_form(w));

  // Quadratic coefficient of the same data as a convergence diagnostic.
  Eigen::MatrixXd x(static_cast<Eigen::Index>(g), 3);
  for (std::size_t i = 0; i < g; ++i) {
    const double u = pts[i].time - tbar;
    x(static_cast<Eigen::Index>(i), 0) = 1.0;
    x(static_cast<Eigen::Index>(i), 1) = u;
    x(static_cast<Eigen::Index>(i), 2) = u * u;
  }
  const Eigen::MatrixXd pinv = (x.transpose() * x).ldlt().solve(x.transpose());
  std::vector<double> c(g);
  out.curvature = 0.0;
  for (std::size_t i = 0; i < g; ++i) {
    c[i] = pinv(2, static_cast<Eigen::Index>(i));
    out.curvature += c[i] * -pts[i].log_mean;
  }
  out.curvature_error = std::sqrt(quad_form(c));
  const double span = pts.back().time - pts.front().time;
  out.curvature_warning = std::abs(out.curvature) >
                          3.0 * out.curvature_error + 1e-9 * (1.0 + std::abs(out.energy)) / span;
  return out;
}

}  // namespace eprqpt

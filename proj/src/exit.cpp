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

// First exits from a cavity and the exit balance check.

#include <fmt/format.h>

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>

#include "eprqpt/epr.hpp"
#include "eprqpt/error.hpp"
#include "eprqpt/spectral.hpp"
#include "walker.hpp"

namespace eprqpt {

namespace {

void require_in_cavity(const Partition& p, StateId start) {
  if (start >= p.in_cavity.size() || !p.contains(start)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("start state {} is not in the cavity", start));
  }
}

}  // namespace

ExitSample sample_first_exit(const Hamiltonian& h, const Partition& p, StateId start,
                             Stream& rng, double t_max) {
  require_in_cavity(p, start);
  if (!(t_max > 0.0)) throw Error(ErrorCode::kInvalidArgument, "t_max must be > 0");
  const detail::Clock clock(h, SamplingMode::link_rate());
  detail::Walker w(clock, start);
  while (true) {
    const double next = w.next_jump(rng);
    const StateId from = w.state();
    if (next > t_max) return {t_max, from, from, true};
    const StateId to = w.jump(rng);
    if (!p.contains(to)) return {next, from, to, false};
  }
}

double exit_rate_lower_bound(const Partition& p) {
  double lo = std::numeric_limits<double>::infinity();
  for (StateId n : p.cavity_boundary) lo = std::min(lo, p.r_out[n]);
  return lo;
}

double default_exit_horizon(const Partition& p) {
  const double lo = exit_rate_lower_bound(p);
  if (!(lo > 0.0) || !std::isfinite(lo)) {
    throw Error(ErrorCode::kInvalidArgument, "cavity has no out-links");
  }
  return 50.0 / lo;
}

std::vector<ExitSample> sample_exit_times(const Hamiltonian& h, const Partition& p,
                                          StateId start, const ExitRunConfig& config) {
  require_in_cavity(p, start);
  const double t_max = config.t_max > 0.0 ? config.t_max : default_exit_horizon(p);
  using Batch = std::vector<ExitSample>;
  return detail::parallel_reduce<Batch>(
      config.samples, config.workers, [] { return Batch{}; },
      [&](Batch& out, std::size_t worker, std::size_t first, std::size_t count) {
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
          Stream rng(config.seed, worker, first + k);
          out.push_back(sample_first_exit(h, p, start, rng, t_max));
        }
      },
      [](Batch& into, const Batch& part) { into.insert(into.end(), part.begin(), part.end()); });
}

ExitRateFit fit_exit_tail(std::span<const ExitSample> samples, double tail_start) {
  ExitRateFit fit;
  fit.tail_start = tail_start;
  double exposure = 0.0;
  double total = 0.0;
  std::size_t done = 0;
  for (const auto& s : samples) {
    if (s.censored) {
      ++fit.censored;
    } else {
      total += s.tau;
      ++done;
    }
    if (s.tau > tail_start) {
      exposure += s.tau - tail_start;
      if (!s.censored) ++fit.tail_events;
    }
  }
  fit.mean_tau = done > 0 ? total / static_cast<double>(done) : 0.0;
  if (fit.tail_events == 0 || !(exposure > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("no exit events after tail start {}", tail_start));
  }
  const double events = static_cast<double>(fit.tail_events);
  fit.rate = events / exposure;
  fit.std_error = fit.rate / std::sqrt(events);
  return fit;
}

Histogram exit_histogram(std::span<const ExitSample> samples, std::size_t bins, double t_max) {
  if (bins == 0 || !(t_max > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "histogram needs bins > 0 and t_max > 0");
  }
  Histogram out;
  out.bin_width = t_max / static_cast<double>(bins);
  out.counts.assign(bins, 0);
  for (std::size_t b = 0; b <= bins; ++b) out.edges.push_back(out.bin_width * static_cast<double>(b));
  for (const auto& s : samples) {
    if (s.censored || s.tau >= t_max) continue;
    const auto b = std::min(bins - 1, static_cast<std::size_t>(s.tau / out.bin_width));
    ++out.counts[b];
  }
  const double norm = static_cast<double>(samples.size()) * out.bin_width;
  for (std::size_t c : out.counts) out.density.push_back(norm > 0.0 ? static_cast<double>(c) / norm : 0.0);
  return out;
}

namespace {

void require_stoquastic_cavity(const Hamiltonian& h, const Partition& p) {
  for (StateId n : p.cavity) {
    const auto sg = h.signs(n);
    const auto nb = h.neighbors(n);
    for (std::size_t k = 0; k < sg.size(); ++k) {
      if (sg[k] < 0) {
        throw Error(ErrorCode::kNonStoquasticRegion,
                    fmt::format("link ({}, {}) touching the cavity has lambda = -1", n, nb[k]));
      }
    }
  }
}

}  // namespace

double exit_lemma_rhs(const Hamiltonian& h, const Partition& p, StateId start, double t) {
  require_in_cavity(p, start);
  require_stoquastic_cavity(h, p);
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidArgument, "t must be finite and >= 0");
  }
  if (t == 0.0) return 0.0;
  const Restriction bar = restrict_to(h, p.cavity);
  const auto local = [&](StateId n) {
    return static_cast<std::size_t>(std::lower_bound(bar.ids.begin(), bar.ids.end(), n) -
                                    bar.ids.begin());
  };
  std::vector<double> e0(bar.ids.size(), 0.0);
  e0[local(start)] = 1.0;
  std::vector<std::pair<std::size_t, double>> exits;
  for (StateId n : p.cavity_boundary) exits.emplace_back(local(n), p.r_out[n]);

  const Propagator prop(bar.hamiltonian, EigenMethod::kAuto, 1e-12);
  auto integrand = [&](double x) {
    const std::vector<double> v = prop.apply(e0, x);
    double f = 0.0;
    for (const auto& [i, r] : exits) f += r * v[i];
    return f;
  };
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 31>::integrate(integrand, 0.0, t, 20, 1e-8);
}

LemmaCheck check_exit_lemma(const Hamiltonian& h, const Partition& p, StateId start, double t,
                            const EprConfig& config) {
  require_in_cavity(p, start);
  require_stoquastic_cavity(h, p);
  if (!(t > 0.0) || !std::isfinite(t)) {
    throw Error(ErrorCode::kInvalidArgument, "t must be finite and > 0");
  }
  if (config.samples == 0) throw Error(ErrorCode::kInvalidArgument, "samples must be >= 1");

  struct Sums {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t exits = 0;
  };
  const detail::Clock clock(h, SamplingMode::link_rate());
  const Sums s = detail::parallel_reduce<Sums>(
      config.samples, config.workers, [] { return Sums{}; },
      [&](Sums& acc, std::size_t worker, std::size_t first, std::size_t count) {
        for (std::size_t k = 0; k < count; ++k) {
          Stream rng(config.seed, worker, first + k);
          detail::Walker w(clock, start);
          while (true) {
            const double next = w.next_jump(rng);
            if (next >= t) break;
            const double lw = w.log_weight(next);  // integral up to the exit jump
            if (!p.contains(w.jump(rng))) {
              const double x = std::exp(lw);
              acc.sum += x;
              acc.sum_sq += x * x;
              ++acc.exits;
              break;
            }
          }
        }
      },
      [](Sums& into, const Sums& part) {
        into.sum += part.sum;
        into.sum_sq += part.sum_sq;
        into.exits += part.exits;
      });

  LemmaCheck out;
  const double n = static_cast<double>(config.samples);
  out.lhs = s.sum / n;
  out.lhs_error =
      config.samples > 1 ? std::sqrt(std::max(0.0, s.sum_sq / n - out.lhs * out.lhs) / (n - 1.0)) : 0.0;
  out.exit_fraction = static_cast<double>(s.exits) / n;
  out.rhs = exit_lemma_rhs(h, p, start, t);
  out.agree = std::abs(out.lhs - out.rhs) <= 3.0 * out.lhs_error;
  return out;
}

}  // namespace eprqpt

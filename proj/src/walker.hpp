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

#ifndef EPRQPT_SRC_WALKER_HPP_
#define EPRQPT_SRC_WALKER_HPP_

#include <fmt/format.h>

#include <cmath>
#include <exception>
#include <limits>
#include <thread>
#include <vector>

#include "eprqpt/epr.hpp"
#include "eprqpt/error.hpp"

namespace eprqpt::detail {

inline void check_walk_arguments(const Hamiltonian& h, StateId start, double horizon,
                                 const SamplingMode& mode) {
  if (start >= h.dimension()) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("start state {} out of range", start));
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must be finite and > 0");
  }
  if (mode.clock == ClockMode::kUniform && !(mode.rho > 0.0 && std::isfinite(mode.rho))) {
    throw Error(ErrorCode::kInvalidMode, "uniform clock needs a finite rho > 0");
  }
}

// Jump rates, next-state law and weight increments of one clock choice.
class Clock {
 public:
  Clock(const Hamiltonian& h, const SamplingMode& mode)
      : h_(&h), uniform_(mode.clock == ClockMode::kUniform), rho_(mode.rho) {
    if (uniform_) log_rho_ = std::log(rho_);
  }

  const Hamiltonian& hamiltonian() const noexcept { return *h_; }

  double rate(StateId n) const noexcept {
    return uniform_ ? rho_ * h_->active_links(n) : h_->weighted_degree(n);
  }
  double drift(StateId n) const noexcept { return rate(n) - h_->potential(n); }

  std::size_t pick(StateId n, Stream& rng) const noexcept {
    const auto eta = h_->etas(n);
    if (uniform_) {
      const auto k = static_cast<std::size_t>(rng.uniform() * static_cast<double>(eta.size()));
      return std::min(k, eta.size() - 1);
    }
    double u = rng.uniform() * h_->weighted_degree(n);
    for (std::size_t k = 0; k + 1 < eta.size(); ++k) {
      if (u < eta[k]) return k;
      u -= eta[k];
    }
    return eta.size() - 1;
  }

  double log_jump(StateId n, std::size_t k) const noexcept {
    return uniform_ ? std::log(h_->etas(n)[k]) - log_rho_ : 0.0;
  }

  double log_jump_factor(StateId from, StateId to) const {
    const auto nb = h_->neighbors(from);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] == to) return log_jump(from, k);
    }
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("states {} and {} are not linked", from, to));
  }

 private:
  const Hamiltonian* h_;
  bool uniform_;
  double rho_;
  double log_rho_ = 0.0;
};

// One path, advanced jump by jump. The weight integral is kept as
// drift(current) * t + correction so it can be read at any t past the last
// jump without replaying the path.
class Walker {
 public:
  Walker(const Clock& clock, StateId start)
      : clock_(&clock), n_(start), drift_(clock.drift(start)) {}

  StateId state() const noexcept { return n_; }
  int sign() const noexcept { return sign_; }
  double time() const noexcept { return s_; }

  double next_jump(Stream& rng) {
    if (!pending_) {
      const double r = clock_->rate(n_);
      next_ = r > 0.0 ? s_ + rng.exponential(r) : std::numeric_limits<double>::infinity();
      pending_ = true;
    }
    return next_;
  }

  // Performs the pending jump; next_jump must have been called.
  StateId jump(Stream& rng) {
    const Hamiltonian& h = clock_->hamiltonian();
    const std::size_t k = clock_->pick(n_, rng);
    const StateId m = h.neighbors(n_)[k];
    const double d = clock_->drift(m);
    correction_ += (drift_ - d) * next_;
    log_jumps_ += clock_->log_jump(n_, k);
    if (h.signs(n_)[k] < 0) sign_ = -sign_;
    n_ = m;
    drift_ = d;
    s_ = next_;
    pending_ = false;
    return m;
  }

  double log_weight(double t) const noexcept { return drift_ * t + correction_ + log_jumps_; }

 private:
  const Clock* clock_;
  StateId n_;
  double drift_;
  double correction_ = 0.0;
  double log_jumps_ = 0.0;
  double s_ = 0.0;
  double next_ = 0.0;
  bool pending_ = false;
  int sign_ = 1;
};

// Splits `samples` over `workers` (the first samples % workers get one
// extra), runs body(acc, worker, first_index, count) per worker on its own
// thread and merges the partial accumulators in worker order.
template <class Acc, class Make, class Body, class Merge>
Acc parallel_reduce(std::size_t samples, std::size_t workers, Make make, Body body,
                    Merge merge) {
  workers = std::max<std::size_t>(workers, 1);
  std::vector<Acc> parts;
  parts.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) parts.push_back(make());
  std::vector<std::exception_ptr> errors(workers);

  const std::size_t base = samples / workers;
  const std::size_t extra = samples % workers;
  auto run = [&](std::size_t w) {
    try {
      body(parts[w], w, 0, base + (w < extra ? 1 : 0));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Acc out = std::move(parts[0]);
  for (std::size_t w = 1; w < workers; ++w) merge(out, parts[w]);
  return out;
}

}  // namespace eprqpt::detail

#endif  // EPRQPT_SRC_WALKER_HPP_

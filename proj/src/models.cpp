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

#include "eprqpt/models.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "eprqpt/error.hpp"
#include "eprqpt/model_io.hpp"

namespace eprqpt {

namespace {

void check_spins(int spins, int limit) {
  if (spins < 1 || spins > limit) {
    throw Error(ErrorCode::kSizeLimit,
                fmt::format("spin count {} outside [1, {}]", spins, limit));
  }
}

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw Error(ErrorCode::kInvalidArgument, fmt::format("{} must be finite and > 0", what));
  }
}

}  // namespace

std::vector<LinkSpec> hypercube_links(int spins, double gamma) {
  check_spins(spins, kMaxHypercubeSpins);
  check_positive(gamma, "gamma");
  const StateId m = StateId{1} << spins;
  std::vector<LinkSpec> links;
  links.reserve(static_cast<std::size_t>(spins) * m / 2);
  for (StateId n = 0; n < m; ++n) {
    for (int b = 0; b < spins; ++b) {
      const StateId k = n ^ (StateId{1} << b);
      if (n < k) links.push_back({n, k, -gamma});
    }
  }
  return links;
}

Hamiltonian hypercube_free(int spins, double gamma) {
  const auto links = hypercube_links(spins, gamma);
  const std::size_t m = std::size_t{1} << spins;
  return Hamiltonian::build(m, spins, std::vector<double>(m, 0.0), links);
}

TwoLevelModel two_level_rpm(int spins, double gamma, double v1, double v2,
                            std::span<const StateId> cavity) {
  if (!(v1 < v2)) throw Error(ErrorCode::kInvalidArgument, "two-level model needs v1 < v2");
  const auto links = hypercube_links(spins, gamma);
  const std::size_t m = std::size_t{1} << spins;
  const StateId zero[] = {0};
  if (cavity.empty()) cavity = zero;
  std::vector<double> v(m, spins * v2);
  for (StateId n : cavity) {
    if (n >= m) throw Error(ErrorCode::kInvalidArgument, fmt::format("cavity state {} out of range", n));
    v[n] = spins * v1;
  }
  Hamiltonian h = Hamiltonian::build(m, spins, std::move(v), links);
  Partition p = cavity_from_level(h, 1);
  return {std::move(h), std::move(p)};
}

void validate_distribution(std::span<const LevelPoint> dist) {
  if (dist.empty()) throw Error(ErrorCode::kBadDistribution, "empty level distribution");
  double total = 0.0;
  for (const auto& lp : dist) {
    if (!std::isfinite(lp.value) || !(lp.weight > 0.0) || !std::isfinite(lp.weight)) {
      throw Error(ErrorCode::kBadDistribution,
                  "levels must be finite with finite weights > 0");
    }
    total += lp.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw Error(ErrorCode::kBadDistribution, fmt::format("weights sum to {:.17g}, not 1", total));
  }
}

Hamiltonian random_potential_model(std::size_t dimension, std::span<const LevelPoint> dist,
                                   const KineticSpec& kinetic, std::uint64_t seed) {
  validate_distribution(dist);
  std::vector<LinkSpec> links;
  double size = kinetic.size_parameter;
  switch (kinetic.kind) {
    case KineticSpec::Kind::kHypercube: {
      if (!std::has_single_bit(dimension)) {
        throw Error(ErrorCode::kInvalidArgument, "hypercube kinetic needs M = 2^N");
      }
      const int spins = std::countr_zero(dimension);
      links = hypercube_links(spins, kinetic.eta);
      if (size <= 0.0) size = spins;
      break;
    }
    case KineticSpec::Kind::kCompleteGraph:
      check_positive(kinetic.eta, "eta");
      if (dimension > 4096) throw Error(ErrorCode::kSizeLimit, "complete graph limited to M <= 4096");
      for (StateId i = 0; i < dimension; ++i) {
        for (StateId j = i + 1; j < dimension; ++j) links.push_back({i, j, -kinetic.eta});
      }
      break;
    case KineticSpec::Kind::kFromFile:
      links = kinetic.links;
      break;
  }
  if (size <= 0.0) size = std::log2(static_cast<double>(dimension));

  std::vector<double> weights;
  for (const auto& lp : dist) weights.push_back(lp.weight);
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<double> v(dimension);
  for (double& x : v) x = size * dist[pick(rng)].value;
  return Hamiltonian::build(dimension, size, std::move(v), links);
}

Hamiltonian qrem(int spins, double gamma, double coupling, std::uint64_t seed) {
  check_spins(spins, kMaxQremSpins);
  check_positive(coupling, "J");
  const auto links = hypercube_links(spins, gamma);
  const std::size_t m = std::size_t{1} << spins;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, coupling * std::sqrt(spins / 2.0));
  std::vector<double> v(m);
  for (double& x : v) x = normal(rng);
  return Hamiltonian::build(m, spins, std::move(v), links);
}

std::string_view family_name(Family f) noexcept {
  switch (f) {
    case Family::kHypercubeFree:
      return "hypercube";
    case Family::kTwoLevelRpm:
      return "two-level";
    case Family::kRandomPotential:
      return "random-potential";
    case Family::kQrem:
      return "qrem";
    case Family::kFromFile:
      return "file";
  }
  return "unknown";
}

Family parse_family(std::string_view text) {
  for (Family f : {Family::kHypercubeFree, Family::kTwoLevelRpm, Family::kRandomPotential,
                   Family::kQrem, Family::kFromFile}) {
    if (text == family_name(f)) return f;
  }
  throw Error(ErrorCode::kInvalidArgument, fmt::format("unknown model family '{}'", text));
}

double ModelSpec::get(const std::string& key) const {
  const auto it = parameters.find(key);
  if (it == parameters.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("family {} needs parameter '{}'", family_name(family), key));
  }
  return it->second;
}

double ModelSpec::get(const std::string& key, double fallback) const {
  const auto it = parameters.find(key);
  return it == parameters.end() ? fallback : it->second;
}

namespace {

int spins_of(const ModelSpec& s) {
  const double n = s.get("N");
  if (n != std::floor(n)) throw Error(ErrorCode::kInvalidArgument, "N must be an integer");
  return static_cast<int>(n);
}

std::vector<StateId> level_one_states(const Hamiltonian& h) {
  const LevelDensity d = level_density(h);
  std::vector<StateId> out;
  for (StateId n = 0; n < h.dimension(); ++n) {
    if (d.level_of_state[n] == 0) out.push_back(n);
  }
  return out;
}

}  // namespace

Extensivity extensivity(const Hamiltonian& h) {
  Extensivity e;
  for (StateId n = 0; n < h.dimension(); ++n) {
    e.potential_density = std::max(e.potential_density, std::abs(h.potential(n)));
    e.rate_density = std::max(e.rate_density, h.weighted_degree(n));
  }
  e.potential_density /= h.size_parameter();
  e.rate_density /= h.size_parameter();
  return e;
}

BuiltModel build_model(const ModelSpec& spec) {
  switch (spec.family) {
    case Family::kHypercubeFree: {
      Hamiltonian h = hypercube_free(spins_of(spec), spec.get("gamma"));
      std::vector<StateId> cavity = spec.cavity.empty() ? std::vector<StateId>{0} : spec.cavity;
      return {std::move(h), std::move(cavity), {}};
    }
    case Family::kTwoLevelRpm: {
      const std::vector<StateId> cavity =
          spec.cavity.empty() ? std::vector<StateId>{0} : spec.cavity;
      TwoLevelModel m =
          two_level_rpm(spins_of(spec), spec.get("gamma"), spec.get("v1"), spec.get("v2"), cavity);
      return {std::move(m.hamiltonian), cavity, {}};
    }
    case Family::kRandomPotential: {
      const int spins = spins_of(spec);
      check_spins(spins, kMaxHypercubeSpins);
      std::vector<LevelPoint> dist = spec.levels;
      if (dist.empty()) {
        const double p1 = spec.get("p1");
        if (!(p1 > 0.0 && p1 < 1.0)) throw Error(ErrorCode::kBadDistribution, "p1 must lie in (0, 1)");
        dist = {{spec.get("v1"), p1}, {spec.get("v2"), 1.0 - p1}};
      }
      Hamiltonian h = random_potential_model(std::size_t{1} << spins, dist,
                                             KineticSpec::hypercube(spec.get("gamma")), spec.seed);
      std::vector<StateId> cavity = spec.cavity.empty() ? level_one_states(h) : spec.cavity;
      return {std::move(h), std::move(cavity), {}};
    }
    case Family::kQrem: {
      Hamiltonian h = qrem(spins_of(spec), spec.get("gamma"), spec.get("J", 1.0), spec.seed);
      std::vector<StateId> cavity = spec.cavity.empty() ? level_one_states(h) : spec.cavity;
      return {std::move(h), std::move(cavity), {}};
    }
    case Family::kFromFile: {
      ModelFile f = load_model(spec.path);
      std::vector<StateId> cavity = !spec.cavity.empty() ? spec.cavity
                                    : !f.cavity.empty()  ? f.cavity
                                                         : level_one_states(f.hamiltonian);
      return {std::move(f.hamiltonian), std::move(cavity), std::move(f.warnings)};
    }
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown model family");
}

}  // namespace eprqpt

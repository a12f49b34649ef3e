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

// Model families. Spin models use state id = configuration bitmask, bit b
// being spin b; hypercube links join ids differing in one bit.

#ifndef EPRQPT_MODELS_HPP_
#define EPRQPT_MODELS_HPP_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eprqpt/fock.hpp"

namespace eprqpt {

inline constexpr int kMaxHypercubeSpins = 20;
inline constexpr int kMaxQremSpins = 16;

/// Links n -- n ^ (1 << b) with value -gamma, ascending.
std::vector<LinkSpec> hypercube_links(int spins, double gamma);

/// Free transverse field: V = 0, ground energy -N gamma. Throws kSizeLimit.
Hamiltonian hypercube_free(int spins, double gamma);

struct TwoLevelModel {
  Hamiltonian hamiltonian;
  Partition partition;
};

/// V = N v1 on `cavity` (default: the all-zeros state), N v2 elsewhere.
TwoLevelModel two_level_rpm(int spins, double gamma, double v1, double v2,
                            std::span<const StateId> cavity = {});

struct LevelPoint {
  double value;   // density; V(n) = N * value
  double weight;
};

struct KineticSpec {
  enum class Kind { kHypercube, kCompleteGraph, kFromFile };
  Kind kind = Kind::kHypercube;
  double eta = 1.0;               // hypercube gamma or complete-graph eta
  double size_parameter = 0.0;    // <= 0: log2(M)
  std::vector<LinkSpec> links;    // kFromFile

  static KineticSpec hypercube(double gamma) { return {Kind::kHypercube, gamma, 0.0, {}}; }
  static KineticSpec complete_graph(double eta) { return {Kind::kCompleteGraph, eta, 0.0, {}}; }
};

/// Throws kBadDistribution on empty, non-finite, non-positive or
/// unnormalized (1e-12) weights.
void validate_distribution(std::span<const LevelPoint> dist);

/// V(n) i.i.d. from `dist`, scaled by N. Draws use std::mt19937_64(seed).
Hamiltonian random_potential_model(std::size_t dimension, std::span<const LevelPoint> dist,
                                   const KineticSpec& kinetic, std::uint64_t seed);

/// Hypercube with eta = gamma and V(n) ~ Normal(0, N J^2 / 2) i.i.d.
Hamiltonian qrem(int spins, double gamma, double coupling, std::uint64_t seed);

enum class Family { kHypercubeFree, kTwoLevelRpm, kRandomPotential, kQrem, kFromFile };

std::string_view family_name(Family f) noexcept;
/// Accepts "hypercube", "two-level", "random-potential", "qrem", "file".
Family parse_family(std::string_view text);

struct ModelSpec {
  Family family = Family::kTwoLevelRpm;
  // N, gamma, v1, v2, p1, J as the family needs them.
  std::map<std::string, double> parameters;
  std::vector<LevelPoint> levels;  // kRandomPotential; empty means {v1: p1, v2: 1-p1}
  std::uint64_t seed = 1;
  std::string path;                // kFromFile
  std::vector<StateId> cavity;     // empty: family default

  double get(const std::string& key) const;
  double get(const std::string& key, double fallback) const;
};

struct BuiltModel {
  Hamiltonian hamiltonian;
  std::vector<StateId> cavity;  // default or requested cavity
  std::vector<std::string> warnings;
};

/// Same spec, same Hamiltonian (bit for bit).
BuiltModel build_model(const ModelSpec& spec);

struct Extensivity {
  double potential_density = 0.0;  // max |V| / N
  double rate_density = 0.0;       // max R / N
};

Extensivity extensivity(const Hamiltonian& h);

}  // namespace eprqpt

#endif  // EPRQPT_MODELS_HPP_

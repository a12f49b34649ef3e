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

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <vector>

#include "eprqpt/error.hpp"
#include "eprqpt/models.hpp"

using namespace eprqpt;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::kInvariantViolation;
}

bool same(const Hamiltonian& a, const Hamiltonian& b) {
  if (a.dimension() != b.dimension()) return false;
  if (!std::equal(a.potential().begin(), a.potential().end(), b.potential().begin())) return false;
  const auto la = a.links(), lb = b.links();
  if (la.size() != lb.size()) return false;
  for (std::size_t k = 0; k < la.size(); ++k) {
    if (la[k].i != lb[k].i || la[k].j != lb[k].j || la[k].value != lb[k].value) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("hypercube links") {
  CHECK(hypercube_links(5, 1.0).size() == 5 * 16);
  for (const auto& l : hypercube_links(4, 0.3)) {
    CHECK(l.i < l.j);
    CHECK(std::has_single_bit(l.i ^ l.j));
    CHECK(l.value == -0.3);
  }
  CHECK(code_of([] { hypercube_links(0, 1.0); }) == ErrorCode::kSizeLimit);
  CHECK(code_of([] { hypercube_links(kMaxHypercubeSpins + 1, 1.0); }) == ErrorCode::kSizeLimit);
  CHECK(code_of([] { hypercube_links(3, 0.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("two-level model") {
  const TwoLevelModel m = two_level_rpm(4, 0.5, -0.2, 1.0);
  CHECK(m.hamiltonian.potential(0) == doctest::Approx(-0.8));
  for (StateId n = 1; n < 16; ++n) CHECK(m.hamiltonian.potential(n) == 4.0);
  CHECK(m.partition.cavity == std::vector<StateId>{0});
  CHECK(m.hamiltonian.size_parameter() == 4.0);
  const StateId two[] = {0, 5};
  CHECK(two_level_rpm(4, 0.5, 0.0, 1.0, two).partition.cavity == std::vector<StateId>{0, 5});
  CHECK(code_of([] { two_level_rpm(3, 1.0, 1.0, 1.0); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("random potential model") {
  const LevelPoint dist[] = {{0.0, 0.2}, {1.0, 0.3}, {2.5, 0.5}};
  const auto a = random_potential_model(4096, dist, KineticSpec::hypercube(1.0), 17);
  const auto b = random_potential_model(4096, dist, KineticSpec::hypercube(1.0), 17);
  const auto c = random_potential_model(4096, dist, KineticSpec::hypercube(1.0), 18);
  CHECK(same(a, b));
  CHECK_FALSE(same(a, c));
  CHECK(a.size_parameter() == 12.0);
  std::size_t low = 0;
  for (double v : a.potential()) {
    CHECK((v == 0.0 || v == 12.0 || v == 30.0));
    low += v == 0.0;
  }
  // binomial(4096, 0.2): sd 25.6
  CHECK(std::abs(double(low) - 819.2) < 5 * 25.6);

  const auto k = random_potential_model(20, dist, KineticSpec::complete_graph(0.1), 1);
  CHECK(k.link_count() == 190);
  CHECK(k.size_parameter() == doctest::Approx(std::log2(20.0)));
  CHECK(code_of([&] { random_potential_model(4097, dist, KineticSpec::complete_graph(0.1), 1); }) ==
        ErrorCode::kSizeLimit);
  CHECK(code_of([&] { random_potential_model(12, dist, KineticSpec::hypercube(1.0), 1); }) ==
        ErrorCode::kInvalidArgument);
}

TEST_CASE("distribution validation") {
  const LevelPoint unnormalized[] = {{0.0, 0.5}, {1.0, 0.6}};
  const LevelPoint zero[] = {{0.0, 1.0}, {1.0, 0.0}};
  const LevelPoint nan[] = {{std::nan(""), 1.0}};
  CHECK(code_of([&] { validate_distribution(unnormalized); }) == ErrorCode::kBadDistribution);
  CHECK(code_of([&] { validate_distribution(zero); }) == ErrorCode::kBadDistribution);
  CHECK(code_of([&] { validate_distribution(nan); }) == ErrorCode::kBadDistribution);
  CHECK(code_of([&] { validate_distribution({}); }) == ErrorCode::kBadDistribution);
}

TEST_CASE("QREM energies have variance N J^2 / 2") {
  const int n = 14;
  const double j = 1.3;
  const auto h = qrem(n, 1.0, j, 4);
  double mean = 0.0, sq = 0.0;
  for (double v : h.potential()) mean += v, sq += v * v;
  const double m = double(h.dimension());
  mean /= m;
  const double var = sq / m - mean * mean;
  const double sigma2 = n * j * j / 2;
  CHECK(std::abs(mean) < 5 * std::sqrt(sigma2 / m));
  CHECK(var == doctest::Approx(sigma2).epsilon(5 * std::sqrt(2.0 / m)));
  CHECK(same(h, qrem(n, 1.0, j, 4)));
  CHECK(code_of([] { qrem(kMaxQremSpins + 1, 1.0, 1.0, 1); }) == ErrorCode::kSizeLimit);
}

TEST_CASE("family names round-trip") {
  for (Family f : {Family::kHypercubeFree, Family::kTwoLevelRpm, Family::kRandomPotential,
                   Family::kQrem, Family::kFromFile}) {
    CHECK(parse_family(family_name(f)) == f);
  }
  CHECK(code_of([] { parse_family("rem"); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("build_model defaults") {
  ModelSpec s;
  s.family = Family::kHypercubeFree;
  s.parameters = {{"N", 3}, {"gamma", 0.5}};
  BuiltModel m = build_model(s);
  CHECK(m.hamiltonian.dimension() == 8);
  CHECK(m.cavity == std::vector<StateId>{0});

  s.family = Family::kRandomPotential;
  s.parameters = {{"N", 6}, {"gamma", 1.0}, {"v1", 0.0}, {"v2", 1.0}, {"p1", 0.25}};
  s.seed = 3;
  m = build_model(s);
  for (StateId n : m.cavity) CHECK(m.hamiltonian.potential(n) == 0.0);
  CHECK(same(m.hamiltonian, build_model(s).hamiltonian));

  s.parameters["p1"] = 1.0;
  CHECK(code_of([&] { build_model(s); }) == ErrorCode::kBadDistribution);

  s.family = Family::kTwoLevelRpm;
  s.parameters = {{"N", 4}, {"gamma", 1.0}, {"v1", 0.0}};
  CHECK(code_of([&] { build_model(s); }) == ErrorCode::kInvalidArgument);
  s.parameters["N"] = 2.5;
  s.parameters["v2"] = 1.0;
  CHECK(code_of([&] { build_model(s); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("extensivity") {
  const TwoLevelModel m = two_level_rpm(5, 0.4, -1.0, 2.0);
  const Extensivity e = extensivity(m.hamiltonian);
  CHECK(e.potential_density == doctest::Approx(2.0));
  CHECK(e.rate_density == doctest::Approx(0.4));
}

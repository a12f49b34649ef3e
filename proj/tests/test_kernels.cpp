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

// Scalar reference kernels against the AVX2 variants, element by element.

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "eprqpt/kernels.hpp"
#include "eprqpt/models.hpp"

using namespace eprqpt;
using kernels::KernelTable;

namespace {

std::vector<double> random_vector(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

const KernelTable* simd() {
  const KernelTable* t = kernels::avx2_table();
  return t != nullptr && kernels::host_supports_avx2() ? t : nullptr;
}

}  // namespace

TEST_CASE("scalar dot, axpy and scale on hand values") {
  const KernelTable& s = kernels::scalar_table();
  const double x[] = {1, 2, 3, 4, 5};
  double y[] = {1, 1, 1, 1, 1};
  CHECK(s.dot(x, x, 5) == 55.0);
  s.axpy(2.0, x, y, 5);
  CHECK(y[4] == 11.0);
  s.scale(0.5, y, 5);
  CHECK(y[0] == 1.5);
  CHECK(s.dot(x, y, 0) == 0.0);
}

TEST_CASE("avx2 kernels match the scalar reference for every tail length") {
  const KernelTable* v = simd();
  if (v == nullptr) {
    MESSAGE("AVX2 unavailable, equivalence skipped");
    return;
  }
  const KernelTable& s = kernels::scalar_table();
  std::mt19937_64 rng(11);
  for (std::size_t n : {0u, 1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 31u, 33u, 1000u, 1027u}) {
    CAPTURE(n);
    const auto x = random_vector(n, rng);
    const auto y = random_vector(n, rng);
    double mag = 0.0;
    for (std::size_t i = 0; i < n; ++i) mag += std::abs(x[i] * y[i]);
    CHECK(std::abs(s.dot(x.data(), y.data(), n) - v->dot(x.data(), y.data(), n)) <=
          1e-14 * (mag + 1e-300));

    auto ys = y;
    auto yv = y;
    s.axpy(0.37, x.data(), ys.data(), n);
    v->axpy(0.37, x.data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
      // FMA rounds once; the reference rounds twice.
      CHECK(std::abs(ys[i] - yv[i]) <= 4e-16 * (std::abs(ys[i]) + std::abs(0.37 * x[i])));
    }

    auto xs = x;
    auto xv = x;
    s.scale(-1.75, xs.data(), n);
    v->scale(-1.75, xv.data(), n);
    CHECK(xs == xv);
  }
}

TEST_CASE("avx2 spmv matches the scalar reference on irregular rows") {
  const KernelTable* v = simd();
  if (v == nullptr) return;
  const KernelTable& s = kernels::scalar_table();
  // Random potential on a hypercube (regular rows) and a path (degree 1-2).
  const LevelPoint dist[] = {{0.0, 0.5}, {1.0, 0.5}};
  const Hamiltonian cube =
      random_potential_model(1024, dist, KineticSpec::hypercube(0.8), 3);
  std::vector<LinkSpec> path;
  for (StateId i = 0; i + 1 < 37; ++i) path.push_back({i, i + 1, i % 3 == 0 ? 0.4 : -1.1});
  std::vector<double> pv(37);
  for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = 0.1 * static_cast<double>(i);
  const Hamiltonian chain = Hamiltonian::build(37, 1.0, pv, path);

  std::mt19937_64 rng(5);
  for (const Hamiltonian* h : {&cube, &chain}) {
    const std::size_t m = h->dimension();
    const auto x = random_vector(m, rng);
    std::vector<double> ys(m), yv(m);
    s.spmv(h->csr(), x.data(), ys.data());
    v->spmv(h->csr(), x.data(), yv.data());
    for (std::size_t i = 0; i < m; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-14);
  }
}

TEST_CASE("force switches the active table and back") {
  const kernels::Isa before = kernels::active().isa;
  CHECK(kernels::force(kernels::Isa::kScalar));
  CHECK(kernels::active().isa == kernels::Isa::kScalar);
  if (simd() != nullptr) {
    CHECK(kernels::force(kernels::Isa::kAvx2));
    CHECK(kernels::active().isa == kernels::Isa::kAvx2);
  }
  kernels::force(before);
  CHECK(kernels::isa_name(kernels::Isa::kAvx2) == "avx2");
}

TEST_CASE("wrappers compute the 2-norm through the active table") {
  const std::vector<double> x{3.0, 4.0};
  CHECK(kernels::norm2(x) == doctest::Approx(5.0).epsilon(1e-15));
}

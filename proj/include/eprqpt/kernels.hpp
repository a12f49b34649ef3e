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

// Dense vector and sparse matrix-vector kernels used by the Krylov solvers.
//
// Every kernel has a portable scalar reference implementation and, where
// the host supports it, an AVX2+FMA variant. The active table is picked once
// at first use from CPUID; tests can pin either table explicitly and compare
// them element by element.

#ifndef EPRQPT_KERNELS_HPP_
#define EPRQPT_KERNELS_HPP_

#include <cstdint>
#include <span>
#include <string_view>

namespace eprqpt::kernels {

enum class Isa { kScalar, kAvx2 };

/// CSR view of a symmetric operator H = diag + offdiag.
struct CsrView {
  std::span<const double> diag;
  std::span<const std::uint32_t> row_offsets;  // size rows + 1
  std::span<const std::uint32_t> cols;
  std::span<const double> values;
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  void (*scale)(double a, double* x, std::size_t n);
  void (*spmv)(const CsrView& h, const double* x, double* y);
};

const KernelTable& scalar_table() noexcept;
/// Null when the binary was built without AVX2 support.
const KernelTable* avx2_table() noexcept;

bool host_supports_avx2() noexcept;

/// The table used by the library. Defaults to the best supported ISA; the
/// EPRQPT_KERNELS=scalar environment variable forces the reference path.
const KernelTable& active() noexcept;

/// Overrides the active table. Returns false if the ISA is unavailable.
bool force(Isa isa) noexcept;

std::string_view isa_name(Isa isa) noexcept;

// Convenience wrappers over active().
double dot(std::span<const double> x, std::span<const double> y);
void axpy(double a, std::span<const double> x, std::span<double> y);
void scale(double a, std::span<double> x);
double norm2(std::span<const double> x);
void spmv(const CsrView& h, std::span<const double> x, std::span<double> y);

}  // namespace eprqpt::kernels

#endif  // EPRQPT_KERNELS_HPP_

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

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "kernels_impl.hpp"

namespace eprqpt::kernels {

namespace {

const KernelTable kScalar{Isa::kScalar, &scalar::dot, &scalar::axpy,
                          &scalar::scale, &scalar::spmv};

#if defined(EPRQPT_HAVE_AVX2)
const KernelTable kAvx2{Isa::kAvx2, &avx2::dot, &avx2::axpy, &avx2::scale,
                        &avx2::spmv};
#endif

const KernelTable* pick_default() noexcept {
  if (const char* env = std::getenv("EPRQPT_KERNELS");
      env != nullptr && std::strcmp(env, "scalar") == 0) {
    return &kScalar;
  }
  if (const KernelTable* t = avx2_table(); t != nullptr && host_supports_avx2()) {
    return t;
  }
  return &kScalar;
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

const KernelTable* avx2_table() noexcept {
#if defined(EPRQPT_HAVE_AVX2)
  return &kAvx2;
#else
  return nullptr;
#endif
}

bool host_supports_avx2() noexcept {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

bool force(Isa isa) noexcept {
  if (isa == Isa::kScalar) {
    slot().store(&kScalar, std::memory_order_release);
    return true;
  }
  const KernelTable* t = avx2_table();
  if (t == nullptr || !host_supports_avx2()) return false;
  slot().store(t, std::memory_order_release);
  return true;
}

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

double dot(std::span<const double> x, std::span<const double> y) {
  assert(x.size() == y.size());
  return active().dot(x.data(), y.data(), x.size());
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  assert(x.size() == y.size());
  active().axpy(a, x.data(), y.data(), x.size());
}

void scale(double a, std::span<double> x) { active().scale(a, x.data(), x.size()); }

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void spmv(const CsrView& h, std::span<const double> x, std::span<double> y) {
  assert(x.size() == h.diag.size() && y.size() == h.diag.size());
  active().spmv(h, x.data(), y.data());
}

}  // namespace eprqpt::kernels

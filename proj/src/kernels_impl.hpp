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

#ifndef EPRQPT_SRC_KERNELS_IMPL_HPP_
#define EPRQPT_SRC_KERNELS_IMPL_HPP_

#include "eprqpt/kernels.hpp"

namespace eprqpt::kernels {

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
void spmv(const CsrView& h, const double* x, double* y);
}  // namespace scalar

#if defined(EPRQPT_HAVE_AVX2)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double a, const double* x, double* y, std::size_t n);
void scale(double a, double* x, std::size_t n);
void spmv(const CsrView& h, const double* x, double* y);
}  // namespace avx2
#endif

}  // namespace eprqpt::kernels

#endif  // EPRQPT_SRC_KERNELS_IMPL_HPP_

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

#include "kernels_impl.hpp"

namespace eprqpt::kernels::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(double a, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void spmv(const CsrView& h, const double* x, double* y) {
  const std::size_t rows = h.diag.size();
  for (std::size_t r = 0; r < rows; ++r) {
    double s = h.diag[r] * x[r];
    for (std::uint32_t k = h.row_offsets[r]; k < h.row_offsets[r + 1]; ++k) {
      s += h.values[k] * x[h.cols[k]];
    }
    y[r] = s;
  }
}

}  // namespace eprqpt::kernels::scalar

/* Copyright 2026 The docdet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "docdet/numerics/kernels.h"

namespace docdet::numerics::kernels {
namespace {

void gemm_scalar(const GemmArgs& g) {
  for (std::size_t i = 0; i < g.m; ++i) {
    double* c_row = g.c + i * g.ldc;
    for (std::size_t p = 0; p < g.k; ++p) {
      const double a = g.a[i * g.a_row_stride + p * g.a_col_stride];
      const double* b_row = g.b + p * g.ldb;
      for (std::size_t j = 0; j < g.n; ++j) c_row[j] += a * b_row[j];
    }
  }
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void gemm_abt_scalar(const GemmAbtArgs& g) {
  for (std::size_t i = 0; i < g.m; ++i) {
    for (std::size_t j = 0; j < g.n; ++j) {
      g.c[i * g.ldc + j] += dot_scalar(g.a + i * g.lda, g.b + j * g.ldb, g.k);
    }
  }
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Backend::kScalar, "scalar", gemm_scalar,
                                 gemm_abt_scalar, dot_scalar, axpy_scalar};
  return table;
}

}  // namespace docdet::numerics::kernels

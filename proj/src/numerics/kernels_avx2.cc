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

// Compiled with -mavx2 -mfma; only reached after a CPUID check.
#include <immintrin.h>

#include <algorithm>

#include "docdet/numerics/kernels.h"

namespace docdet::numerics::kernels {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// 4 rows of C x 8 columns, accumulated over all of k.
inline void gemm_block_4x8(const GemmArgs& g, std::size_t i, std::size_t j) {
  const double* a0 = g.a + i * g.a_row_stride;
  const double* a1 = a0 + g.a_row_stride;
  const double* a2 = a1 + g.a_row_stride;
  const double* a3 = a2 + g.a_row_stride;
  double* c0 = g.c + i * g.ldc + j;
  double* c1 = c0 + g.ldc;
  double* c2 = c1 + g.ldc;
  double* c3 = c2 + g.ldc;
  __m256d c00 = _mm256_loadu_pd(c0), c01 = _mm256_loadu_pd(c0 + 4);
  __m256d c10 = _mm256_loadu_pd(c1), c11 = _mm256_loadu_pd(c1 + 4);
  __m256d c20 = _mm256_loadu_pd(c2), c21 = _mm256_loadu_pd(c2 + 4);
  __m256d c30 = _mm256_loadu_pd(c3), c31 = _mm256_loadu_pd(c3 + 4);
  const double* b = g.b + j;
  const std::size_t acs = g.a_col_stride;
  for (std::size_t p = 0; p < g.k; ++p, b += g.ldb) {
    const __m256d b0 = _mm256_loadu_pd(b);
    const __m256d b1 = _mm256_loadu_pd(b + 4);
    const std::size_t off = p * acs;
    __m256d a = _mm256_broadcast_sd(a0 + off);
    c00 = _mm256_fmadd_pd(a, b0, c00);
    c01 = _mm256_fmadd_pd(a, b1, c01);
    a = _mm256_broadcast_sd(a1 + off);
    c10 = _mm256_fmadd_pd(a, b0, c10);
    c11 = _mm256_fmadd_pd(a, b1, c11);
    a = _mm256_broadcast_sd(a2 + off);
    c20 = _mm256_fmadd_pd(a, b0, c20);
    c21 = _mm256_fmadd_pd(a, b1, c21);
    a = _mm256_broadcast_sd(a3 + off);
    c30 = _mm256_fmadd_pd(a, b0, c30);
    c31 = _mm256_fmadd_pd(a, b1, c31);
  }
  _mm256_storeu_pd(c0, c00);
  _mm256_storeu_pd(c0 + 4, c01);
  _mm256_storeu_pd(c1, c10);
  _mm256_storeu_pd(c1 + 4, c11);
  _mm256_storeu_pd(c2, c20);
  _mm256_storeu_pd(c2 + 4, c21);
  _mm256_storeu_pd(c3, c30);
  _mm256_storeu_pd(c3 + 4, c31);
}

inline void gemm_block_1x8(const GemmArgs& g, std::size_t i, std::size_t j) {
  const double* a0 = g.a + i * g.a_row_stride;
  double* c0 = g.c + i * g.ldc + j;
  __m256d c00 = _mm256_loadu_pd(c0), c01 = _mm256_loadu_pd(c0 + 4);
  const double* b = g.b + j;
  for (std::size_t p = 0; p < g.k; ++p, b += g.ldb) {
    const __m256d a = _mm256_broadcast_sd(a0 + p * g.a_col_stride);
    c00 = _mm256_fmadd_pd(a, _mm256_loadu_pd(b), c00);
    c01 = _mm256_fmadd_pd(a, _mm256_loadu_pd(b + 4), c01);
  }
  _mm256_storeu_pd(c0, c00);
  _mm256_storeu_pd(c0 + 4, c01);
}

inline void gemm_block_1x4(const GemmArgs& g, std::size_t i, std::size_t j) {
  const double* a0 = g.a + i * g.a_row_stride;
  double* c0 = g.c + i * g.ldc + j;
  __m256d acc = _mm256_loadu_pd(c0);
  const double* b = g.b + j;
  for (std::size_t p = 0; p < g.k; ++p, b += g.ldb) {
    acc = _mm256_fmadd_pd(_mm256_broadcast_sd(a0 + p * g.a_col_stride),
                          _mm256_loadu_pd(b), acc);
  }
  _mm256_storeu_pd(c0, acc);
}

void gemm_avx2(const GemmArgs& g) {
  std::size_t j = 0;
  for (; j + 8 <= g.n; j += 8) {
    std::size_t i = 0;
    for (; i + 4 <= g.m; i += 4) gemm_block_4x8(g, i, j);
    for (; i < g.m; ++i) gemm_block_1x8(g, i, j);
  }
  for (; j + 4 <= g.n; j += 4) {
    for (std::size_t i = 0; i < g.m; ++i) gemm_block_1x4(g, i, j);
  }
  for (; j < g.n; ++j) {
    for (std::size_t i = 0; i < g.m; ++i) {
      const double* a0 = g.a + i * g.a_row_stride;
      double acc = g.c[i * g.ldc + j];
      for (std::size_t p = 0; p < g.k; ++p) {
        acc += a0[p * g.a_col_stride] * g.b[p * g.ldb + j];
      }
      g.c[i * g.ldc + j] = acc;
    }
  }
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d s0 = _mm256_setzero_pd(), s1 = _mm256_setzero_pd();
  __m256d s2 = _mm256_setzero_pd(), s3 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
    s1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 4), _mm256_loadu_pd(y + i + 4), s1);
    s2 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 8), _mm256_loadu_pd(y + i + 8), s2);
    s3 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i + 12), _mm256_loadu_pd(y + i + 12), s3);
  }
  for (; i + 4 <= n; i += 4) {
    s0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i), s0);
  }
  double s = hsum(_mm256_add_pd(_mm256_add_pd(s0, s1), _mm256_add_pd(s2, s3)));
  for (; i < n; ++i) s += x[i] * y[i];
  return s;
}

// Two rows of A against four rows of B per pass, k processed in chunks so
// the A rows stay cache resident while B streams.
void gemm_abt_avx2(const GemmAbtArgs& g) {
  constexpr std::size_t kChunk = 1024;
  for (std::size_t k0 = 0; k0 < g.k; k0 += kChunk) {
    const std::size_t len = std::min(kChunk, g.k - k0);
    const std::size_t vec_len = len & ~std::size_t{3};
    std::size_t i = 0;
    for (; i + 2 <= g.m; i += 2) {
      const double* a0 = g.a + i * g.lda + k0;
      const double* a1 = a0 + g.lda;
      std::size_t j = 0;
      for (; j + 4 <= g.n; j += 4) {
        const double* b0 = g.b + j * g.ldb + k0;
        const double* b1 = b0 + g.ldb;
        const double* b2 = b1 + g.ldb;
        const double* b3 = b2 + g.ldb;
        __m256d s00 = _mm256_setzero_pd(), s01 = _mm256_setzero_pd();
        __m256d s02 = _mm256_setzero_pd(), s03 = _mm256_setzero_pd();
        __m256d s10 = _mm256_setzero_pd(), s11 = _mm256_setzero_pd();
        __m256d s12 = _mm256_setzero_pd(), s13 = _mm256_setzero_pd();
        for (std::size_t p = 0; p < vec_len; p += 4) {
          const __m256d x0 = _mm256_loadu_pd(a0 + p);
          const __m256d x1 = _mm256_loadu_pd(a1 + p);
          __m256d y = _mm256_loadu_pd(b0 + p);
          s00 = _mm256_fmadd_pd(x0, y, s00);
          s10 = _mm256_fmadd_pd(x1, y, s10);
          y = _mm256_loadu_pd(b1 + p);
          s01 = _mm256_fmadd_pd(x0, y, s01);
          s11 = _mm256_fmadd_pd(x1, y, s11);
          y = _mm256_loadu_pd(b2 + p);
          s02 = _mm256_fmadd_pd(x0, y, s02);
          s12 = _mm256_fmadd_pd(x1, y, s12);
          y = _mm256_loadu_pd(b3 + p);
          s03 = _mm256_fmadd_pd(x0, y, s03);
          s13 = _mm256_fmadd_pd(x1, y, s13);
        }
        double r[2][4] = {{hsum(s00), hsum(s01), hsum(s02), hsum(s03)},
                          {hsum(s10), hsum(s11), hsum(s12), hsum(s13)}};
        for (std::size_t p = vec_len; p < len; ++p) {
          r[0][0] += a0[p] * b0[p];
          r[0][1] += a0[p] * b1[p];
          r[0][2] += a0[p] * b2[p];
          r[0][3] += a0[p] * b3[p];
          r[1][0] += a1[p] * b0[p];
          r[1][1] += a1[p] * b1[p];
          r[1][2] += a1[p] * b2[p];
          r[1][3] += a1[p] * b3[p];
        }
        for (std::size_t q = 0; q < 4; ++q) {
          g.c[i * g.ldc + j + q] += r[0][q];
          g.c[(i + 1) * g.ldc + j + q] += r[1][q];
        }
      }
      for (; j < g.n; ++j) {
        const double* b0 = g.b + j * g.ldb + k0;
        g.c[i * g.ldc + j] += dot_avx2(a0, b0, len);
        g.c[(i + 1) * g.ldc + j] += dot_avx2(a1, b0, len);
      }
    }
    for (; i < g.m; ++i) {
      const double* a0 = g.a + i * g.lda + k0;
      for (std::size_t j = 0; j < g.n; ++j) {
        g.c[i * g.ldc + j] += dot_avx2(a0, g.b + j * g.ldb + k0, len);
      }
    }
  }
}

void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(a, _mm256_loadu_pd(x + i),
                                            _mm256_loadu_pd(y + i)));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{Backend::kAvx2, "avx2", gemm_avx2,
                                 gemm_abt_avx2, dot_avx2, axpy_avx2};
  return &table;
}

}  // namespace docdet::numerics::kernels

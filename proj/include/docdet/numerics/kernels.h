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

#ifndef DOCDET_NUMERICS_KERNELS_H_
#define DOCDET_NUMERICS_KERNELS_H_

#include <cstddef>

// Dense inner loops behind conv2d and linear. Each kernel has a portable
// scalar reference and, on x86-64, an AVX2/FMA variant picked at startup
// from CPUID. The variants agree to rounding; the reference is the oracle in
// the equivalence tests.

namespace docdet::numerics::kernels {

enum class Backend { kScalar, kAvx2 };

// C[i, j] += sum_p A(i, p) * B[p, j] for i < m, j < n, p < k.
// A(i, p) = a[i * a_row_stride + p * a_col_stride], which covers both A and
// its transpose. B and C are row-major with leading dimensions ldb / ldc.
struct GemmArgs {
  std::size_t m, n, k;
  const double* a;
  std::size_t a_row_stride, a_col_stride;
  const double* b;
  std::size_t ldb;
  double* c;
  std::size_t ldc;
};

// C[i, j] += dot(A[i, :k], B[j, :k]); A, B, C row-major.
struct GemmAbtArgs {
  std::size_t m, n, k;
  const double* a;
  std::size_t lda;
  const double* b;
  std::size_t ldb;
  double* c;
  std::size_t ldc;
};

struct KernelTable {
  Backend backend;
  const char* name;
  void (*gemm)(const GemmArgs&);
  void (*gemm_abt)(const GemmAbtArgs&);
  double (*dot)(const double* x, const double* y, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in.
const KernelTable* avx2_table();

bool backend_available(Backend b);
const char* backend_name(Backend b);

// Best available backend for this CPU.
Backend detect_backend();

// Process-wide active table, initialised from detect_backend().
const KernelTable& active();
Backend active_backend();
// Throws ConfigError if `b` is unavailable.
void set_backend(Backend b);

// Restores the previous backend on destruction.
class ScopedBackend {
 public:
  explicit ScopedBackend(Backend b) : previous_(active_backend()) {
    set_backend(b);
  }
  ~ScopedBackend() { set_backend(previous_); }
  ScopedBackend(const ScopedBackend&) = delete;
  ScopedBackend& operator=(const ScopedBackend&) = delete;

 private:
  Backend previous_;
};

inline void gemm(const GemmArgs& args) { active().gemm(args); }
inline void gemm_abt(const GemmAbtArgs& args) { active().gemm_abt(args); }
inline double dot(const double* x, const double* y, std::size_t n) {
  return active().dot(x, y, n);
}
inline void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}

}  // namespace docdet::numerics::kernels

#endif  // DOCDET_NUMERICS_KERNELS_H_

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

#ifndef DOCDET_NUMERICS_GRADCHECK_H_
#define DOCDET_NUMERICS_GRADCHECK_H_

#include <cstddef>
#include <functional>

#include "docdet/numerics/tensor.h"

namespace docdet::numerics {

// Scalar-valued function of one tensor together with its analytic gradient.
struct ScalarFunction {
  std::function<double(const Tensor&)> value;
  std::function<Tensor(const Tensor&)> gradient;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares the analytic gradient with central differences
// (f(x + eps) - f(x - eps)) / (2 eps) element by element. The relative error
// of one element is |a - n| / max(|a|, |n|, abs_floor); the floor keeps
// near-zero gradients from amplifying round-off.
GradCheckResult finite_diff_check_detailed(const ScalarFunction& f,
                                           const Tensor& input, double epsilon,
                                           double abs_floor = 1e-6);

double finite_diff_check(const ScalarFunction& f, const Tensor& input,
                         double epsilon);

}  // namespace docdet::numerics

#endif  // DOCDET_NUMERICS_GRADCHECK_H_

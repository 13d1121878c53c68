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

#include "docdet/numerics/gradcheck.h"

#include <algorithm>
#include <cmath>

#include "docdet/error.h"

namespace docdet::numerics {

GradCheckResult finite_diff_check_detailed(const ScalarFunction& f,
                                           const Tensor& input, double epsilon,
                                           double abs_floor) {
  if (!(epsilon > 0.0)) throw ConfigError("finite_diff_check: epsilon must be > 0");
  const Tensor analytic = f.gradient(input);
  if (analytic.shape() != input.shape()) {
    throw ShapeError("finite_diff_check: gradient shape " +
                     shape_to_string(analytic.shape()) + " != input shape " +
                     shape_to_string(input.shape()));
  }
  GradCheckResult r;
  Tensor probe = input;
  for (std::size_t i = 0; i < input.size(); ++i) {
    const double orig = probe[i];
    probe[i] = orig + epsilon;
    const double plus = f.value(probe);
    probe[i] = orig - epsilon;
    const double minus = f.value(probe);
    probe[i] = orig;
    const double numeric = (plus - minus) / (2.0 * epsilon);
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), abs_floor});
    const double err = std::abs(a - numeric) / denom;
    if (i == 0 || err > r.max_relative_error) {
      r.max_relative_error = err;
      r.worst_index = i;
      r.analytic = a;
      r.numeric = numeric;
    }
  }
  return r;
}

double finite_diff_check(const ScalarFunction& f, const Tensor& input,
                         double epsilon) {
  return finite_diff_check_detailed(f, input, epsilon).max_relative_error;
}

}  // namespace docdet::numerics

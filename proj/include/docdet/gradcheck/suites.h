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

#ifndef DOCDET_GRADCHECK_SUITES_H_
#define DOCDET_GRADCHECK_SUITES_H_

#include <cstdint>
#include <string>
#include <vector>

namespace docdet::gradcheck {

// Every suite must stay at or below this max relative error.
inline constexpr double kTolerance = 1e-3;

struct SuiteResult {
  std::string name;
  double max_relative_error = 0.0;
  std::string worst;  // which input / parameter element was worst
  double seconds = 0.0;
  bool passed() const { return max_relative_error <= kTolerance; }
};

// conv2d, linear, max_pool2d, bilinear_sample, roi_align,
// softmax_cross_entropy, smooth_l1, end_to_end_align, end_to_end_pool.
const std::vector<std::string>& suite_names();

// Throws ConfigError for an unknown name.
SuiteResult run_suite(const std::string& name, std::uint64_t seed);
std::vector<SuiteResult> run_all(std::uint64_t seed);

}  // namespace docdet::gradcheck

#endif  // DOCDET_GRADCHECK_SUITES_H_

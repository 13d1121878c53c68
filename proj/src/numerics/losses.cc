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

#include "docdet/numerics/losses.h"

#include <algorithm>
#include <cmath>

#include "docdet/error.h"

namespace docdet::numerics {

std::vector<double> softmax(std::span<const double> logits) {
  if (logits.empty()) throw ShapeError("softmax: empty logits");
  const double m = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    p[i] = std::exp(logits[i] - m);
    sum += p[i];
  }
  for (double& v : p) v /= sum;
  return p;
}

LossAndGrad softmax_cross_entropy(const Tensor& logits, std::size_t target) {
  if (target >= logits.size()) {
    throw ShapeError("softmax_cross_entropy: target " + std::to_string(target) +
                     " >= class count " + std::to_string(logits.size()));
  }
  const auto v = logits.values();
  const double m = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - m);
  const double log_z = m + std::log(sum);
  LossAndGrad r{log_z - v[target], Tensor(logits.shape())};
  for (std::size_t i = 0; i < v.size(); ++i) r.grad[i] = std::exp(v[i] - log_z);
  r.grad[target] -= 1.0;
  return r;
}

double smooth_l1_value(double x) {
  const double a = std::abs(x);
  return a < 1.0 ? 0.5 * x * x : a - 0.5;
}

double smooth_l1_grad(double x) {
  if (x >= 1.0) return 1.0;
  if (x <= -1.0) return -1.0;
  return x;
}

LossAndGrad smooth_l1(const Tensor& x) {
  LossAndGrad r{0.0, Tensor(x.shape())};
  for (std::size_t i = 0; i < x.size(); ++i) {
    r.loss += smooth_l1_value(x[i]);
    r.grad[i] = smooth_l1_grad(x[i]);
  }
  return r;
}

}  // namespace docdet::numerics

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

#ifndef DOCDET_NUMERICS_LOSSES_H_
#define DOCDET_NUMERICS_LOSSES_H_

#include <cstddef>
#include <span>
#include <vector>

#include "docdet/numerics/tensor.h"

namespace docdet::numerics {

struct LossAndGrad {
  double loss = 0.0;
  Tensor grad;  // d loss / d input, same shape as the input
};

// Max-subtracted softmax.
std::vector<double> softmax(std::span<const double> logits);

// -log softmax(logits)[target]; grad = softmax - onehot(target).
LossAndGrad softmax_cross_entropy(const Tensor& logits, std::size_t target);

// Sum over elements of 0.5 x^2 for |x| < 1, |x| - 0.5 otherwise.
LossAndGrad smooth_l1(const Tensor& x);

// Scalar helpers used by the detector's batched losses.
double smooth_l1_value(double x);
double smooth_l1_grad(double x);

}  // namespace docdet::numerics

#endif  // DOCDET_NUMERICS_LOSSES_H_

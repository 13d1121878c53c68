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

#ifndef DOCDET_NUMERICS_OPS_H_
#define DOCDET_NUMERICS_OPS_H_

#include <cstddef>
#include <vector>

#include "docdet/numerics/tensor.h"

// Differentiable operators. Every forward has an explicit backward taking
// the forward inputs (or the indices it recorded) and the upstream gradient.

namespace docdet::numerics {

struct Conv2dParams {
  int stride = 1;
  int padding = 0;
};

// Output spatial extent: floor((in + 2 * padding - kernel) / stride) + 1.
std::size_t conv_output_size(std::size_t in, std::size_t kernel, int stride,
                             int padding);

// Cross-correlation. input [N, C, H, W], weight [O, C, KH, KW], bias [O].
Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              Conv2dParams p);

struct Conv2dGrads {
  Tensor input;
  Tensor weight;
  Tensor bias;
};

// With need_input_grad false, `input` of the result stays empty.
Conv2dGrads conv2d_backward(const Tensor& input, const Tensor& weight,
                            const Tensor& grad_output, Conv2dParams p,
                            bool need_input_grad = true);

Tensor relu(const Tensor& x);
Tensor relu_backward(const Tensor& x, const Tensor& grad_output);

struct MaxPoolResult {
  Tensor output;
  // Flat input index of each output element's maximum.
  std::vector<std::size_t> argmax;
};

// input [N, C, H, W]; no padding. Ties resolve to the first position in
// row-major window order.
MaxPoolResult max_pool2d(const Tensor& input, int window, int stride);
Tensor max_pool2d_backward(const Shape& input_shape,
                           const std::vector<std::size_t>& argmax,
                           const Tensor& grad_output);

// Bilinear interpolation on feature [C, H, W] where cell (i, j) sits at
// point (x = j, y = i). Coordinates outside [0, W-1] x [0, H-1] are clamped
// to the border.
double bilinear_sample(const Tensor& feature, double x, double y,
                       std::size_t channel);
// Adds grad * d(sample)/d(feature) into feature_grad.
void bilinear_sample_backward(double grad, double x, double y,
                              std::size_t channel, Tensor& feature_grad);

// input [N, in], weight [out, in], bias [out] -> [N, out].
Tensor linear(const Tensor& input, const Tensor& weight, const Tensor& bias);

struct LinearGrads {
  Tensor input;
  Tensor weight;
  Tensor bias;
};

LinearGrads linear_backward(const Tensor& input, const Tensor& weight,
                            const Tensor& grad_output);

// Wraps the spatial dims of [N, C, H, W] periodically by `pad` cells.
Tensor pad_circular(const Tensor& input, int pad);

}  // namespace docdet::numerics

#endif  // DOCDET_NUMERICS_OPS_H_

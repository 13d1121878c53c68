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

#include "docdet/detector/head.h"

#include "docdet/error.h"
#include "docdet/numerics/ops.h"

namespace docdet::detector {

using numerics::Tensor;

HeadOutput head_forward(const DetectorModel& model, const Tensor& roi_features,
                        HeadCache* cache) {
  if (roi_features.rank() != 4) {
    throw ShapeError("head expects [R, C, oh, ow], got " +
                     numerics::shape_to_string(roi_features.shape()));
  }
  const std::size_t r = roi_features.dim(0);
  const Tensor flat = roi_features.reshaped({r, roi_features.size() / r});
  Tensor pre = numerics::linear(flat, model.head_fc.weight.value, model.head_fc.bias.value);
  Tensor hidden = numerics::relu(pre);
  HeadOutput out{numerics::linear(hidden, model.head_cls.weight.value, model.head_cls.bias.value),
                 numerics::linear(hidden, model.head_reg.weight.value, model.head_reg.bias.value)};
  if (cache != nullptr) {
    cache->input = flat;
    cache->pre_activation = std::move(pre);
    cache->hidden = std::move(hidden);
  }
  return out;
}

Tensor head_backward(DetectorModel& model, const HeadCache& cache, const Tensor& grad_logits,
                     const Tensor& grad_deltas, const numerics::Shape& roi_shape) {
  numerics::LinearGrads gc =
      numerics::linear_backward(cache.hidden, model.head_cls.weight.value, grad_logits);
  numerics::LinearGrads gr =
      numerics::linear_backward(cache.hidden, model.head_reg.weight.value, grad_deltas);
  numerics::add_inplace(model.head_cls.weight.grad, gc.weight);
  numerics::add_inplace(model.head_cls.bias.grad, gc.bias);
  numerics::add_inplace(model.head_reg.weight.grad, gr.weight);
  numerics::add_inplace(model.head_reg.bias.grad, gr.bias);
  numerics::add_inplace(gc.input, gr.input);
  const Tensor g_pre = numerics::relu_backward(cache.pre_activation, gc.input);
  numerics::LinearGrads gf =
      numerics::linear_backward(cache.input, model.head_fc.weight.value, g_pre);
  numerics::add_inplace(model.head_fc.weight.grad, gf.weight);
  numerics::add_inplace(model.head_fc.bias.grad, gf.bias);
  gf.input.reshape(roi_shape);
  return std::move(gf.input);
}

}  // namespace docdet::detector

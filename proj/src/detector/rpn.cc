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

#include "docdet/detector/rpn.h"

#include <cmath>

#include "docdet/error.h"
#include "docdet/numerics/ops.h"

namespace docdet::detector {

using numerics::Tensor;

namespace {

// [1, k*d, H, W] -> [k, H, W, d]
Tensor to_anchor_major(const Tensor& t, std::size_t k, std::size_t d) {
  const std::size_t h = t.dim(2), w = t.dim(3);
  Tensor out({k, h, w, d});
  const double* src = t.data();
  double* dst = out.data();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
          dst[((a * h + i) * w + j) * d + c] = src[((a * d + c) * h + i) * w + j];
  return out;
}

// Inverse of to_anchor_major.
Tensor to_channel_major(const Tensor& t) {
  const std::size_t k = t.dim(0), h = t.dim(1), w = t.dim(2), d = t.dim(3);
  Tensor out({1, k * d, h, w});
  const double* src = t.data();
  double* dst = out.data();
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t c = 0; c < d; ++c)
      for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
          dst[((a * d + c) * h + i) * w + j] = src[((a * h + i) * w + j) * d + c];
  return out;
}

}  // namespace

RpnOutput rpn_forward(const DetectorModel& model, const Tensor& features, RpnCache* cache,
                      RpnOptions opts) {
  const std::size_t k = model.config.anchors.per_location();
  Tensor input = opts.circular_padding ? numerics::pad_circular(features, 1) : features;
  Tensor pre = numerics::conv2d(input, model.rpn_conv.weight.value, model.rpn_conv.bias.value,
                                {1, opts.circular_padding ? 0 : 1});
  Tensor hidden = numerics::relu(pre);
  RpnOutput out;
  out.scores = to_anchor_major(
      numerics::conv2d(hidden, model.rpn_cls.weight.value, model.rpn_cls.bias.value, {1, 0}), k, 2);
  out.deltas = to_anchor_major(
      numerics::conv2d(hidden, model.rpn_reg.weight.value, model.rpn_reg.bias.value, {1, 0}), k, 4);
  if (cache) {
    cache->input = std::move(input);
    cache->pre_activation = std::move(pre);
    cache->hidden = std::move(hidden);
    cache->circular = opts.circular_padding;
  }
  return out;
}

Tensor rpn_backward(DetectorModel& model, const RpnCache& cache, const Tensor& grad_scores,
                    const Tensor& grad_deltas) {
  const Tensor gc = to_channel_major(grad_scores);
  const Tensor gr = to_channel_major(grad_deltas);
  if (gc.dim(2) != cache.hidden.dim(2) || gc.dim(3) != cache.hidden.dim(3)) {
    throw ShapeError("RPN gradient does not match the cached forward pass");
  }
  numerics::Conv2dGrads cls = numerics::conv2d_backward(cache.hidden, model.rpn_cls.weight.value, gc, {1, 0});
  numerics::Conv2dGrads reg = numerics::conv2d_backward(cache.hidden, model.rpn_reg.weight.value, gr, {1, 0});
  numerics::add_inplace(model.rpn_cls.weight.grad, cls.weight);
  numerics::add_inplace(model.rpn_cls.bias.grad, cls.bias);
  numerics::add_inplace(model.rpn_reg.weight.grad, reg.weight);
  numerics::add_inplace(model.rpn_reg.bias.grad, reg.bias);
  Tensor g_hidden = std::move(cls.input);
  numerics::add_inplace(g_hidden, reg.input);
  const Tensor g_pre = numerics::relu_backward(cache.pre_activation, g_hidden);
  numerics::Conv2dGrads conv = numerics::conv2d_backward(
      cache.input, model.rpn_conv.weight.value, g_pre, {1, cache.circular ? 0 : 1});
  numerics::add_inplace(model.rpn_conv.weight.grad, conv.weight);
  numerics::add_inplace(model.rpn_conv.bias.grad, conv.bias);
  if (!cache.circular) return std::move(conv.input);
  // Fold the wrapped border back onto the cells it was copied from.
  const std::size_t c = conv.input.dim(1), hp = conv.input.dim(2), wp = conv.input.dim(3);
  const std::size_t h = hp - 2, w = wp - 2;
  Tensor g({1, c, h, w});
  for (std::size_t ch = 0; ch < c; ++ch)
    for (std::size_t i = 0; i < hp; ++i)
      for (std::size_t j = 0; j < wp; ++j)
        g.at(0, ch, (i + h - 1) % h, (j + w - 1) % w) += conv.input.at(0, ch, i, j);
  return g;
}

std::vector<double> objectness(const RpnOutput& out) {
  const std::size_t n = out.scores.size() / 2;
  std::vector<double> p(n);
  const double* s = out.scores.data();
  for (std::size_t i = 0; i < n; ++i) {
    p[i] = 1.0 / (1.0 + std::exp(s[2 * i] - s[2 * i + 1]));
  }
  return p;
}

}  // namespace docdet::detector

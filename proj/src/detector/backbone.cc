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

#include "docdet/detector/backbone.h"

#include "docdet/error.h"
#include "docdet/numerics/ops.h"

namespace docdet::detector {

using numerics::Tensor;

Tensor backbone_forward(const DetectorModel& model, const Tensor& image, BackboneCache* cache) {
  const BackboneConfig& cfg = model.config.backbone;
  if (image.rank() != 4 || image.dim(0) != 1 ||
      image.dim(1) != static_cast<std::size_t>(cfg.in_channels)) {
    throw ShapeError("backbone expects [1, " + std::to_string(cfg.in_channels) +
                     ", H, W], got " + numerics::shape_to_string(image.shape()));
  }
  Tensor x = image;
  for (double& v : x.values()) v = 1.0 - v;
  if (cache) cache->layers.assign(cfg.layers.size(), {});
  std::size_t conv_index = 0;
  for (std::size_t i = 0; i < cfg.layers.size(); ++i) {
    const LayerSpec& l = cfg.layers[i];
    if (l.kind == LayerSpec::Kind::kConv) {
      const Layer& p = model.backbone[conv_index++];
      Tensor y = numerics::conv2d(x, p.weight.value, p.bias.value, {l.stride, l.padding});
      if (cache) cache->layers[i].input = std::move(x);
      if (l.relu) {
        Tensor act = numerics::relu(y);
        if (cache) cache->layers[i].pre_activation = std::move(y);
        x = std::move(act);
      } else {
        x = std::move(y);
      }
    } else {
      numerics::MaxPoolResult r = numerics::max_pool2d(x, l.kernel, l.stride);
      if (cache) {
        cache->layers[i].input = std::move(x);
        cache->layers[i].argmax = std::move(r.argmax);
      }
      x = std::move(r.output);
    }
  }
  return x;
}

void backbone_backward(DetectorModel& model, const BackboneCache& cache,
                       const Tensor& grad_features) {
  const BackboneConfig& cfg = model.config.backbone;
  if (cache.layers.size() != cfg.layers.size()) {
    throw ShapeError("backbone cache does not match the model");
  }
  Tensor g = grad_features;
  std::size_t conv_index = model.backbone.size();
  for (std::size_t i = cfg.layers.size(); i-- > 0;) {
    const LayerSpec& l = cfg.layers[i];
    const BackboneCache::Entry& e = cache.layers[i];
    if (l.kind == LayerSpec::Kind::kConv) {
      Layer& p = model.backbone[--conv_index];
      if (l.relu) g = numerics::relu_backward(e.pre_activation, g);
      const bool first = i == 0;
      numerics::Conv2dGrads grads =
          numerics::conv2d_backward(e.input, p.weight.value, g, {l.stride, l.padding}, !first);
      numerics::add_inplace(p.weight.grad, grads.weight);
      numerics::add_inplace(p.bias.grad, grads.bias);
      if (first) break;
      g = std::move(grads.input);
    } else {
      g = numerics::max_pool2d_backward(e.input.shape(), e.argmax, g);
    }
  }
}

}  // namespace docdet::detector

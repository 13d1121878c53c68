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

#ifndef DOCDET_DETECTOR_RPN_H_
#define DOCDET_DETECTOR_RPN_H_

#include "docdet/detector/model.h"
#include "docdet/numerics/tensor.h"

namespace docdet::detector {

// Index a of the k anchors per location follows generate_anchors:
// a = scale_index * |ratios| + ratio_index.
struct RpnOutput {
  numerics::Tensor scores;  // [k, H, W, 2] logits, channel 1 = object
  numerics::Tensor deltas;  // [k, H, W, 4] (dx, dy, dw, dh)
};

struct RpnOptions {
  // Wrap the 3x3 window around the map edges instead of zero padding.
  bool circular_padding = false;
};

struct RpnCache {
  numerics::Tensor input;           // features, padded when circular
  numerics::Tensor pre_activation;  // 3x3 conv output
  numerics::Tensor hidden;          // relu of the above
  bool circular = false;
};

// features [1, C, H, W]. The same weights slide over every cell.
RpnOutput rpn_forward(const DetectorModel& model, const numerics::Tensor& features,
                      RpnCache* cache, RpnOptions opts = {});

// Accumulates RPN parameter gradients and returns d loss / d features.
numerics::Tensor rpn_backward(DetectorModel& model, const RpnCache& cache,
                              const numerics::Tensor& grad_scores,
                              const numerics::Tensor& grad_deltas);

// Objectness probability softmax(scores)[1] per anchor, flat anchor order.
std::vector<double> objectness(const RpnOutput& out);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_RPN_H_

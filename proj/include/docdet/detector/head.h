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

#ifndef DOCDET_DETECTOR_HEAD_H_
#define DOCDET_DETECTOR_HEAD_H_

#include "docdet/detector/model.h"
#include "docdet/numerics/tensor.h"

namespace docdet::detector {

struct HeadOutput {
  numerics::Tensor class_logits;  // [R, K + 1], column 0 = background
  numerics::Tensor deltas;        // [R, 4K], class c at columns 4c..4c+3
};

struct HeadCache {
  numerics::Tensor input;   // [R, C*oh*ow]
  numerics::Tensor pre_activation;
  numerics::Tensor hidden;
};

// roi_features [R, C, oh, ow].
HeadOutput head_forward(const DetectorModel& model, const numerics::Tensor& roi_features,
                        HeadCache* cache);
// Accumulates head gradients; returns d loss / d roi_features.
numerics::Tensor head_backward(DetectorModel& model, const HeadCache& cache,
                               const numerics::Tensor& grad_logits,
                               const numerics::Tensor& grad_deltas,
                               const numerics::Shape& roi_shape);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_HEAD_H_

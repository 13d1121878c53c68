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

#ifndef DOCDET_DETECTOR_BACKBONE_H_
#define DOCDET_DETECTOR_BACKBONE_H_

#include <vector>

#include "docdet/detector/model.h"
#include "docdet/numerics/tensor.h"

namespace docdet::detector {

struct BackboneCache {
  struct Entry {
    numerics::Tensor input;
    numerics::Tensor pre_activation;  // conv layers with relu
    std::vector<std::size_t> argmax;  // pool layers
  };
  std::vector<Entry> layers;
};

// image [1, 3, H, W] in [0, 1] -> features [1, C, H/stride, W/stride].
// The network sees ink density 1 - x, so blank paper is all zeros.
numerics::Tensor backbone_forward(const DetectorModel& model, const numerics::Tensor& image,
                                  BackboneCache* cache);

// Accumulates parameter gradients. No gradient flows to the image.
void backbone_backward(DetectorModel& model, const BackboneCache& cache,
                       const numerics::Tensor& grad_features);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_BACKBONE_H_

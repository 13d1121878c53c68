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

#ifndef DOCDET_DETECTOR_MODEL_H_
#define DOCDET_DETECTOR_MODEL_H_

#include <cstdint>
#include <vector>

#include "docdet/detector/config.h"
#include "docdet/numerics/tensor.h"

namespace docdet::detector {

// weight [out, in, kh, kw] / [out, in], bias [out].
struct Layer {
  numerics::Parameter weight;
  numerics::Parameter bias;
};

struct DetectorModel {
  DetectorConfig config;
  std::vector<Layer> backbone;  // one per conv layer, in order
  Layer rpn_conv;               // 3x3
  Layer rpn_cls;                // 1x1, 2k outputs
  Layer rpn_reg;                // 1x1, 4k outputs
  Layer head_fc;                // C*oh*ow -> hidden
  Layer head_cls;               // hidden -> |classes| + 1
  Layer head_reg;               // hidden -> 4 |classes|

  // Stable order: backbone, rpn, head; weight before bias.
  std::vector<numerics::Parameter*> parameters();
  std::vector<const numerics::Parameter*> parameters() const;
  void zero_grad();
  std::size_t parameter_count() const;
};

// He-normal convs and hidden layer, N(0, 0.01) score layers, N(0, 0.001)
// box layers, zero biases. Deterministic in seed.
DetectorModel create_model(const DetectorConfig& config, std::uint64_t seed);

// Re-draws head_cls and head_reg for config.labels (sizes may change).
void reinit_class_layers(DetectorModel& model, std::uint64_t seed);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_MODEL_H_

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

#ifndef DOCDET_DETECTOR_LOSSES_H_
#define DOCDET_DETECTOR_LOSSES_H_

#include <random>
#include <span>
#include <vector>

#include "docdet/data/image.h"
#include "docdet/detector/backbone.h"
#include "docdet/detector/model.h"
#include "docdet/detector/rpn.h"
#include "docdet/detector/targets.h"
#include "docdet/geometry/box.h"
#include "docdet/numerics/tensor.h"

namespace docdet::detector {

// Everything up to the RPN outputs for one image, kept for the backward pass.
struct ForwardState {
  numerics::Tensor image;
  BackboneCache backbone;
  numerics::Tensor features;  // [1, C, H, W]
  RpnCache rpn_cache;
  RpnOutput rpn;
  std::vector<geometry::Box> anchors;
};

ForwardState forward_features(const DetectorModel& model, const numerics::Tensor& image,
                              RpnOptions opts = {});

// The sampled targets for one training step. Proposals are treated as
// constants, so with a fixed plan the loss is a smooth function of the
// parameters (up to ReLU/max kinks).
struct TrainingPlan {
  std::vector<std::int8_t> anchor_labels;           // after subsampling
  std::vector<geometry::BoxDelta> anchor_targets;   // meaningful for positives
  std::vector<RoiSample> rois;
};

// gts in preprocessed image coordinates.
TrainingPlan build_plan(const DetectorModel& model, const ForwardState& state,
                        std::span<const data::Annotation> gts, std::mt19937_64& rng);

struct LossBreakdown {
  double rpn_cls = 0.0;
  double rpn_reg = 0.0;
  double head_cls = 0.0;
  double head_reg = 0.0;
  double total() const { return rpn_cls + rpn_reg + head_cls + head_reg; }
};

// Unit-weighted sum of the four terms. Classification terms are means over
// the sampled anchors / RoIs; regression terms are smooth-L1 sums averaged
// over positives. With backward set, adds grad_scale * d total / d params
// into the parameter gradients.
LossBreakdown loss_and_backward(DetectorModel& model, const ForwardState& state,
                                const TrainingPlan& plan, bool backward,
                                double grad_scale = 1.0);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_LOSSES_H_

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

#ifndef DOCDET_DETECTOR_ROI_H_
#define DOCDET_DETECTOR_ROI_H_

#include <span>
#include <vector>

#include "docdet/detector/config.h"
#include "docdet/geometry/box.h"
#include "docdet/numerics/tensor.h"

namespace docdet::detector {

// RoIs are given in feature-map coordinates, where cell (i, j) covers
// [j, j+1) x [i, i+1). features is [C, H, W].

struct RoiPoolResult {
  numerics::Tensor output;           // [C, out_h, out_w]
  std::vector<std::size_t> argmax;   // flat feature index per output
};

// Quantized: the RoI snaps to whole cells (rounded, at least one cell),
// bin k of n spans cells [floor(k L / n), ceil((k+1) L / n)) of the RoI.
// A bin left empty by clipping to the map takes the cell nearest its
// centre.
RoiPoolResult roi_pool(const numerics::Tensor& features, const geometry::Box& roi,
                       const RoiConfig& cfg);
void roi_pool_backward(const numerics::Tensor& grad_output,
                       std::span<const std::size_t> argmax, numerics::Tensor& feature_grad);

// Unquantized: each bin averages samples_per_bin^2 bilinear samples on a
// regular sub-grid. Requires a positive-area RoI.
numerics::Tensor roi_align(const numerics::Tensor& features, const geometry::Box& roi,
                           const RoiConfig& cfg);
void roi_align_backward(const numerics::Tensor& grad_output, const geometry::Box& roi,
                        const RoiConfig& cfg, numerics::Tensor& feature_grad);

// Batched extraction over image-space RoIs (divided by `stride`), using
// cfg.mode. features [1, C, H, W] -> [R, C, out_h, out_w].
struct RoiBatch {
  numerics::Tensor output;
  std::vector<std::vector<std::size_t>> argmax;  // pool mode only
};
RoiBatch roi_features(const numerics::Tensor& features, std::span<const geometry::Box> rois,
                      double stride, const RoiConfig& cfg);
// Returns d loss / d features, shaped like features.
numerics::Tensor roi_features_backward(const numerics::Tensor& features,
                                       std::span<const geometry::Box> rois, double stride,
                                       const RoiConfig& cfg, const RoiBatch& forward,
                                       const numerics::Tensor& grad_output);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_ROI_H_

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

#ifndef DOCDET_DETECTOR_TARGETS_H_
#define DOCDET_DETECTOR_TARGETS_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "docdet/data/image.h"
#include "docdet/detector/config.h"
#include "docdet/geometry/box.h"
#include "docdet/geometry/delta.h"

namespace docdet::detector {

enum AnchorLabel : std::int8_t { kIgnore = -1, kNegative = 0, kPositive = 1 };

struct AnchorAssignment {
  std::vector<std::int8_t> labels;  // AnchorLabel per anchor
  std::vector<int> matched_gt;      // best GT per anchor, -1 without GTs
};

// An anchor is positive when its IoU with some GT reaches positive_iou, or
// when it attains the highest IoU any anchor has with some GT (ties all
// count, zero overlap never does). Remaining anchors whose best IoU is
// at most negative_iou are negative; the rest are ignored. Every anchor takes
// part, including those crossing the image border.
AnchorAssignment assign_anchor_labels(std::span<const geometry::Box> anchors,
                                      std::span<const geometry::Box> gts,
                                      const MatchConfig& cfg);

// Caps the sampled set at rpn_batch with at most positive_fraction
// positives; surplus anchors become kIgnore. Chosen uniformly with rng.
void subsample_anchor_labels(AnchorAssignment& a, const MatchConfig& cfg, std::mt19937_64& rng);

struct RoiSample {
  geometry::Box box;
  int label = 0;      // 0 background, otherwise class id + 1
  int gt = -1;        // matched GT for foreground
  geometry::BoxDelta target;  // weighted, foreground only
};

// Draws up to head_batch RoIs from proposals plus the GT boxes themselves:
// foreground at IoU >= head_positive_iou (at most head_positive_fraction of
// the batch), background below it. Degenerate GT boxes are skipped.
std::vector<RoiSample> sample_rois(std::span<const geometry::Box> proposals,
                                   std::span<const data::Annotation> gts,
                                   const MatchConfig& cfg,
                                   const std::array<double, 4>& delta_weights,
                                   std::mt19937_64& rng);

// GT boxes with positive width and height.
std::vector<data::Annotation> usable_annotations(std::span<const data::Annotation> gts);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_TARGETS_H_

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

#ifndef DOCDET_EVAL_MATCHING_H_
#define DOCDET_EVAL_MATCHING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "docdet/geometry/box.h"

namespace docdet::eval {

// Image indices refer to a caller-defined list of pages.
struct Detection {
  std::size_t image = 0;
  geometry::ClassId label = 0;
  double score = 0.0;
  geometry::Box box;
};

struct GroundTruth {
  std::size_t image = 0;
  geometry::ClassId label = 0;
  geometry::Box box;
};

struct RankedFlag {
  double score = 0.0;
  bool tp = false;
};

struct MatchResult {
  std::vector<RankedFlag> flags;  // descending score; ties keep input order
  std::size_t n_gt = 0;
  std::size_t fn = 0;             // GTs left unmatched by all predictions
};

// Predictions of `label` are visited in descending score order. Each takes
// the still-unmatched GT of the same image and label with the largest IoU
// (lowest index on ties); it is a TP iff that IoU >= iou_threshold, and
// only a TP consumes its GT.
MatchResult match_detections(std::span<const Detection> preds,
                             std::span<const GroundTruth> gts, double iou_threshold,
                             geometry::ClassId label);

}  // namespace docdet::eval

#endif  // DOCDET_EVAL_MATCHING_H_

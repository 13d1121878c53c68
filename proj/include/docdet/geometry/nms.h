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

#ifndef DOCDET_GEOMETRY_NMS_H_
#define DOCDET_GEOMETRY_NMS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "docdet/geometry/box.h"

namespace docdet::geometry {

// Greedy non-maximum suppression ignoring labels. Returns kept indices in
// descending score order; equal scores keep the lower index first. A box is
// suppressed when its IoU with an already kept box exceeds iou_threshold.
std::vector<std::size_t> nms_indices(std::span<const Box> boxes,
                                     std::span<const double> scores,
                                     double iou_threshold);

// Class-wise greedy suppression. Output is sorted by descending score.
std::vector<ScoredBox> nms(std::span<const ScoredBox> boxes,
                           double iou_threshold);

}  // namespace docdet::geometry

#endif  // DOCDET_GEOMETRY_NMS_H_

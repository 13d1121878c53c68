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

#ifndef DOCDET_DETECTOR_PROPOSALS_H_
#define DOCDET_DETECTOR_PROPOSALS_H_

#include <span>
#include <vector>

#include "docdet/detector/config.h"
#include "docdet/detector/rpn.h"
#include "docdet/geometry/box.h"

namespace docdet::detector {

// Class-agnostic proposals (label 0, score = objectness): decode every
// anchor, clip to the image, drop boxes narrower or shorter than
// min_box_size, keep the pre_nms_top_n best (ties by anchor index), NMS,
// keep at most post_nms_top_n.
std::vector<geometry::ScoredBox> propose(const RpnOutput& rpn,
                                         std::span<const geometry::Box> anchors,
                                         const ProposalConfig& cfg, double image_width,
                                         double image_height);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_PROPOSALS_H_

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

#include "docdet/detector/proposals.h"

#include <algorithm>
#include <numeric>

#include "docdet/error.h"
#include "docdet/geometry/delta.h"

namespace docdet::detector {

std::vector<geometry::ScoredBox> propose(const RpnOutput& rpn,
                                         std::span<const geometry::Box> anchors,
                                         const ProposalConfig& cfg, double image_width,
                                         double image_height) {
  cfg.validate();
  const std::vector<double> score = objectness(rpn);
  if (score.size() != anchors.size() || rpn.deltas.size() != 4 * anchors.size()) {
    throw ShapeError("propose: " + std::to_string(anchors.size()) + " anchors vs " +
                     std::to_string(score.size()) + " scores");
  }
  const double* d = rpn.deltas.data();
  std::vector<geometry::Box> boxes;
  std::vector<std::size_t> idx;
  boxes.reserve(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const geometry::Box b = geometry::clip_box(
        geometry::decode_delta(anchors[i], {d[4 * i], d[4 * i + 1], d[4 * i + 2], d[4 * i + 3]}),
        image_width, image_height);
    boxes.push_back(b);
    if (b.width() >= cfg.min_box_size && b.height() >= cfg.min_box_size && b.area() > 0.0) {
      idx.push_back(i);
    }
  }
  const auto by_score = [&](std::size_t a, std::size_t b) {
    return score[a] > score[b] || (score[a] == score[b] && a < b);
  };
  const std::size_t pre = std::min(idx.size(), static_cast<std::size_t>(cfg.pre_nms_top_n));
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(pre), idx.end(), by_score);
  idx.resize(pre);

  std::vector<geometry::ScoredBox> out;
  std::vector<bool> suppressed(pre, false);
  for (std::size_t a = 0; a < pre && out.size() < static_cast<std::size_t>(cfg.post_nms_top_n); ++a) {
    if (suppressed[a]) continue;
    const geometry::Box& keep = boxes[idx[a]];
    out.push_back({keep, 0, score[idx[a]]});
    for (std::size_t b = a + 1; b < pre; ++b) {
      if (!suppressed[b] && geometry::iou(keep, boxes[idx[b]]) > cfg.nms_threshold) {
        suppressed[b] = true;
      }
    }
  }
  return out;
}

}  // namespace docdet::detector

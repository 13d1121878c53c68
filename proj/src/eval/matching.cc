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

#include "docdet/eval/matching.h"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "docdet/error.h"

namespace docdet::eval {

MatchResult match_detections(std::span<const Detection> preds,
                             std::span<const GroundTruth> gts, double iou_threshold,
                             geometry::ClassId label) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("IoU threshold must lie in (0, 1]");
  }
  std::unordered_map<std::size_t, std::vector<std::size_t>> gts_by_image;
  MatchResult out;
  for (std::size_t g = 0; g < gts.size(); ++g) {
    if (gts[g].label != label) continue;
    gts_by_image[gts[g].image].push_back(g);
    ++out.n_gt;
  }
  std::vector<std::size_t> order;
  for (std::size_t p = 0; p < preds.size(); ++p) {
    if (preds[p].label == label) order.push_back(p);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].score > preds[b].score;
  });
  std::vector<bool> used(gts.size(), false);
  std::size_t matched = 0;
  out.flags.reserve(order.size());
  for (std::size_t p : order) {
    const Detection& d = preds[p];
    double best = -1.0;
    std::size_t best_g = 0;
    if (auto it = gts_by_image.find(d.image); it != gts_by_image.end()) {
      for (std::size_t g : it->second) {
        if (used[g]) continue;
        const double o = geometry::iou(d.box, gts[g].box);
        if (o > best) {
          best = o;
          best_g = g;
        }
      }
    }
    const bool tp = best >= iou_threshold;
    if (tp) {
      used[best_g] = true;
      ++matched;
    }
    out.flags.push_back({d.score, tp});
  }
  out.fn = out.n_gt - matched;
  return out;
}

}  // namespace docdet::eval

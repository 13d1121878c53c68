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

#include "docdet/geometry/nms.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "docdet/error.h"

namespace docdet::geometry {

std::vector<std::size_t> nms_indices(std::span<const Box> boxes,
                                     std::span<const double> scores,
                                     double iou_threshold) {
  if (boxes.size() != scores.size()) {
    throw ConfigError("nms: boxes and scores differ in length");
  }
  if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("nms: iou_threshold must lie in [0, 1]");
  }
  std::vector<std::size_t> order(boxes.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] > scores[b];
  });

  std::vector<std::size_t> keep;
  std::vector<bool> suppressed(boxes.size(), false);
  for (std::size_t oi = 0; oi < order.size(); ++oi) {
    const std::size_t idx = order[oi];
    if (suppressed[idx]) continue;
    keep.push_back(idx);
    for (std::size_t oj = oi + 1; oj < order.size(); ++oj) {
      const std::size_t other = order[oj];
      if (!suppressed[other] && iou(boxes[idx], boxes[other]) > iou_threshold) {
        suppressed[other] = true;
      }
    }
  }
  return keep;
}

std::vector<ScoredBox> nms(std::span<const ScoredBox> boxes,
                           double iou_threshold) {
  std::map<ClassId, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    by_label[boxes[i].label].push_back(i);
  }
  std::vector<std::size_t> survivors;
  for (const auto& [label, members] : by_label) {
    std::vector<Box> b;
    std::vector<double> s;
    b.reserve(members.size());
    s.reserve(members.size());
    for (std::size_t m : members) {
      b.push_back(boxes[m].box);
      s.push_back(boxes[m].score);
    }
    for (std::size_t k : nms_indices(b, s, iou_threshold)) {
      survivors.push_back(members[k]);
    }
  }
  std::stable_sort(survivors.begin(), survivors.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (boxes[a].score != boxes[b].score) {
                       return boxes[a].score > boxes[b].score;
                     }
                     return a < b;
                   });
  std::vector<ScoredBox> out;
  out.reserve(survivors.size());
  for (std::size_t i : survivors) out.push_back(boxes[i]);
  return out;
}

}  // namespace docdet::geometry

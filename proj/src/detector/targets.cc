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

#include "docdet/detector/targets.h"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace docdet::detector {

using geometry::Box;

std::vector<data::Annotation> usable_annotations(std::span<const data::Annotation> gts) {
  std::vector<data::Annotation> out;
  for (const data::Annotation& a : gts) {
    if (a.box.width() > 0.0 && a.box.height() > 0.0) out.push_back(a);
  }
  return out;
}

AnchorAssignment assign_anchor_labels(std::span<const Box> anchors, std::span<const Box> gts,
                                      const MatchConfig& cfg) {
  const std::size_t n = anchors.size();
  AnchorAssignment a{std::vector<std::int8_t>(n, kNegative), std::vector<int>(n, -1)};
  if (gts.empty()) return a;
  std::vector<double> best(n, -1.0);
  std::vector<double> gt_best(gts.size(), 0.0);
  std::vector<double> ious(n * gts.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double v = geometry::iou(anchors[i], gts[g]);
      ious[i * gts.size() + g] = v;
      if (v > best[i]) {
        best[i] = v;
        a.matched_gt[i] = static_cast<int>(g);
      }
      gt_best[g] = std::max(gt_best[g], v);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (best[i] >= cfg.positive_iou) {
      a.labels[i] = kPositive;
    } else if (best[i] <= cfg.negative_iou) {
      a.labels[i] = kNegative;
    } else {
      a.labels[i] = kIgnore;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double v = ious[i * gts.size() + g];
      if (v > 0.0 && v == gt_best[g]) {
        a.labels[i] = kPositive;
        // Regress towards the GT it is the best anchor for.
        if (best[i] < cfg.positive_iou) a.matched_gt[i] = static_cast<int>(g);
        break;
      }
    }
  }
  return a;
}

namespace {

// Keeps `keep` of the indices uniformly at random, marks the rest ignored.
void thin(std::vector<std::size_t>& idx, std::size_t keep, AnchorAssignment& a,
          std::mt19937_64& rng) {
  if (idx.size() <= keep) return;
  std::shuffle(idx.begin(), idx.end(), rng);
  for (std::size_t i = keep; i < idx.size(); ++i) a.labels[idx[i]] = kIgnore;
  idx.resize(keep);
}

}  // namespace

void subsample_anchor_labels(AnchorAssignment& a, const MatchConfig& cfg, std::mt19937_64& rng) {
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    if (a.labels[i] == kPositive) pos.push_back(i);
    if (a.labels[i] == kNegative) neg.push_back(i);
  }
  const auto batch = static_cast<std::size_t>(cfg.rpn_batch);
  const auto max_pos = static_cast<std::size_t>(cfg.positive_fraction * cfg.rpn_batch);
  thin(pos, max_pos, a, rng);
  thin(neg, batch - pos.size(), a, rng);
}

std::vector<RoiSample> sample_rois(std::span<const Box> proposals,
                                   std::span<const data::Annotation> annotations,
                                   const MatchConfig& cfg,
                                   const std::array<double, 4>& w, std::mt19937_64& rng) {
  const std::vector<data::Annotation> gts = usable_annotations(annotations);
  std::vector<Box> cands(proposals.begin(), proposals.end());
  for (const data::Annotation& g : gts) cands.push_back(g.box);

  std::vector<RoiSample> fg, bg;
  for (const Box& c : cands) {
    if (!(c.width() > 0.0 && c.height() > 0.0)) continue;
    double best = 0.0;
    int gi = -1;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      const double v = geometry::iou(c, gts[g].box);
      if (v > best) {
        best = v;
        gi = static_cast<int>(g);
      }
    }
    RoiSample s{c, 0, -1, {}};
    if (gi >= 0 && best >= cfg.head_positive_iou) {
      s.label = static_cast<int>(gts[static_cast<std::size_t>(gi)].label) + 1;
      s.gt = gi;
      const geometry::BoxDelta d = geometry::encode_delta(c, gts[static_cast<std::size_t>(gi)].box);
      s.target = {d.dx * w[0], d.dy * w[1], d.dw * w[2], d.dh * w[3]};
      fg.push_back(s);
    } else {
      bg.push_back(s);
    }
  }
  const auto batch = static_cast<std::size_t>(cfg.head_batch);
  const auto max_fg = static_cast<std::size_t>(std::lround(cfg.head_positive_fraction * cfg.head_batch));
  std::shuffle(fg.begin(), fg.end(), rng);
  if (fg.size() > max_fg) fg.resize(max_fg);
  std::shuffle(bg.begin(), bg.end(), rng);
  if (bg.size() > batch - fg.size()) bg.resize(batch - fg.size());
  fg.insert(fg.end(), bg.begin(), bg.end());
  return fg;
}

}  // namespace docdet::detector

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

#include "docdet/detector/inference.h"

#include <algorithm>
#include <cmath>

#include "docdet/detector/head.h"
#include "docdet/detector/losses.h"
#include "docdet/detector/preprocess.h"
#include "docdet/detector/proposals.h"
#include "docdet/detector/roi.h"
#include "docdet/error.h"
#include "docdet/geometry/delta.h"
#include "docdet/geometry/nms.h"
#include "docdet/numerics/losses.h"

namespace docdet::detector {

using geometry::Box;
using geometry::ScoredBox;

void DetectOptions::validate() const {
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw ConfigError("score threshold must lie in [0, 1]");
  }
  if (!(nms_threshold >= 0.0 && nms_threshold <= 1.0)) {
    throw ConfigError("NMS threshold must lie in [0, 1]");
  }
  if (max_detections < 1) throw ConfigError("max_detections must be >= 1");
}

std::vector<ScoredBox> detect(const DetectorModel& model, const data::DocumentImage& image,
                              const DetectOptions& opts) {
  opts.validate();
  const DetectorConfig& cfg = model.config;
  const data::AnnotatedDocument doc{"", image, {}};
  const PreparedImage prep = preprocess(doc, cfg.input_size);
  const ForwardState state = forward_features(model, prep.image);
  const double size = cfg.input_size;
  const std::vector<ScoredBox> props = propose(state.rpn, state.anchors, cfg.proposals, size, size);
  if (props.empty()) return {};
  std::vector<Box> boxes;
  for (const ScoredBox& p : props) boxes.push_back(p.box);
  const RoiBatch roi = roi_features(state.features, boxes, cfg.backbone.total_stride(), cfg.roi);
  const HeadOutput ho = head_forward(model, roi.output, nullptr);

  const std::size_t k1 = ho.class_logits.dim(1);
  const std::size_t dw = ho.deltas.dim(1);
  const auto& w = cfg.head_delta_weights;
  std::vector<ScoredBox> cands;
  for (std::size_t r = 0; r < boxes.size(); ++r) {
    const std::vector<double> prob = numerics::softmax(std::span<const double>(
        ho.class_logits.data() + r * k1, k1));
    for (std::size_t c = 1; c < k1; ++c) {
      if (!(prob[c] > opts.score_threshold)) continue;
      const double* d = ho.deltas.data() + r * dw + 4 * (c - 1);
      const Box b = geometry::clip_box(
          geometry::decode_delta(boxes[r], {d[0] / w[0], d[1] / w[1], d[2] / w[2], d[3] / w[3]}),
          size, size);
      if (!(b.width() > 0.0 && b.height() > 0.0)) continue;
      cands.push_back({b, static_cast<geometry::ClassId>(c - 1), prob[c]});
    }
  }
  std::vector<ScoredBox> kept = geometry::nms(cands, opts.nms_threshold);
  if (kept.size() > static_cast<std::size_t>(opts.max_detections)) {
    kept.resize(static_cast<std::size_t>(opts.max_detections));
  }
  for (ScoredBox& s : kept) {
    s.box = geometry::clip_box(geometry::scale_box(s.box, 1.0 / prep.scale_x, 1.0 / prep.scale_y),
                               image.width(), image.height());
  }
  return kept;
}

}  // namespace docdet::detector

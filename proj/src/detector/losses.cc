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

#include "docdet/detector/losses.h"

#include <cmath>

#include "docdet/detector/head.h"
#include "docdet/detector/proposals.h"
#include "docdet/detector/roi.h"
#include "docdet/geometry/anchors.h"
#include "docdet/numerics/losses.h"

namespace docdet::detector {

using geometry::Box;
using numerics::Tensor;

ForwardState forward_features(const DetectorModel& model, const Tensor& image, RpnOptions opts) {
  ForwardState s;
  s.image = image;
  s.features = backbone_forward(model, image, &s.backbone);
  s.rpn = rpn_forward(model, s.features, &s.rpn_cache, opts);
  s.anchors = geometry::generate_anchors(model.config.anchors, static_cast<int>(s.features.dim(2)),
                                         static_cast<int>(s.features.dim(3)));
  return s;
}

TrainingPlan build_plan(const DetectorModel& model, const ForwardState& state,
                        std::span<const data::Annotation> annotations, std::mt19937_64& rng) {
  const DetectorConfig& cfg = model.config;
  const std::vector<data::Annotation> gts = usable_annotations(annotations);
  std::vector<Box> gt_boxes;
  for (const data::Annotation& a : gts) gt_boxes.push_back(a.box);

  AnchorAssignment assign = assign_anchor_labels(state.anchors, gt_boxes, cfg.match);
  subsample_anchor_labels(assign, cfg.match, rng);
  TrainingPlan plan;
  plan.anchor_targets.resize(state.anchors.size());
  for (std::size_t i = 0; i < state.anchors.size(); ++i) {
    if (assign.labels[i] == kPositive) {
      plan.anchor_targets[i] = geometry::encode_delta(
          state.anchors[i], gt_boxes[static_cast<std::size_t>(assign.matched_gt[i])]);
    }
  }
  plan.anchor_labels = std::move(assign.labels);

  const double w = static_cast<double>(state.image.dim(3));
  const double h = static_cast<double>(state.image.dim(2));
  const std::vector<geometry::ScoredBox> props = propose(state.rpn, state.anchors, cfg.proposals, w, h);
  std::vector<Box> boxes;
  boxes.reserve(props.size());
  for (const geometry::ScoredBox& p : props) boxes.push_back(p.box);
  plan.rois = sample_rois(boxes, gts, cfg.match, cfg.head_delta_weights, rng);
  return plan;
}

LossBreakdown loss_and_backward(DetectorModel& model, const ForwardState& state,
                                const TrainingPlan& plan, bool backward, double grad_scale) {
  const DetectorConfig& cfg = model.config;
  LossBreakdown out;
  const std::size_t n_anchors = state.anchors.size();

  // RPN.
  Tensor g_scores(state.rpn.scores.shape());
  Tensor g_deltas(state.rpn.deltas.shape());
  std::size_t n_sampled = 0, n_pos = 0;
  for (std::int8_t l : plan.anchor_labels) {
    n_sampled += l != kIgnore;
    n_pos += l == kPositive;
  }
  for (std::size_t i = 0; i < n_anchors; ++i) {
    const std::int8_t l = plan.anchor_labels[i];
    if (l == kIgnore) continue;
    const Tensor logits({2}, {state.rpn.scores[2 * i], state.rpn.scores[2 * i + 1]});
    const numerics::LossAndGrad ce = numerics::softmax_cross_entropy(logits, static_cast<std::size_t>(l));
    const double inv = 1.0 / static_cast<double>(n_sampled);
    out.rpn_cls += ce.loss * inv;
    g_scores[2 * i] = ce.grad[0] * inv * grad_scale;
    g_scores[2 * i + 1] = ce.grad[1] * inv * grad_scale;
    if (l != kPositive) continue;
    const geometry::BoxDelta& t = plan.anchor_targets[i];
    const double target[4] = {t.dx, t.dy, t.dw, t.dh};
    const double ip = 1.0 / static_cast<double>(n_pos);
    for (std::size_t q = 0; q < 4; ++q) {
      const double d = state.rpn.deltas[4 * i + q] - target[q];
      out.rpn_reg += numerics::smooth_l1_value(d) * ip;
      g_deltas[4 * i + q] = numerics::smooth_l1_grad(d) * ip * grad_scale;
    }
  }

  // Head.
  Tensor g_features;
  if (!plan.rois.empty()) {
    std::vector<Box> boxes;
    boxes.reserve(plan.rois.size());
    for (const RoiSample& r : plan.rois) boxes.push_back(r.box);
    const double stride = cfg.backbone.total_stride();
    const RoiBatch roi = roi_features(state.features, boxes, stride, cfg.roi);
    HeadCache hc;
    const HeadOutput ho = head_forward(model, roi.output, backward ? &hc : nullptr);
    const std::size_t k1 = ho.class_logits.dim(1);
    const std::size_t nr = plan.rois.size();
    std::size_t n_fg = 0;
    for (const RoiSample& r : plan.rois) n_fg += r.label > 0;
    Tensor g_logits(ho.class_logits.shape());
    Tensor g_hdeltas(ho.deltas.shape());
    for (std::size_t r = 0; r < nr; ++r) {
      const Tensor logits({k1}, std::vector<double>(ho.class_logits.data() + r * k1,
                                                    ho.class_logits.data() + (r + 1) * k1));
      const auto label = static_cast<std::size_t>(plan.rois[r].label);
      const numerics::LossAndGrad ce = numerics::softmax_cross_entropy(logits, label);
      out.head_cls += ce.loss / static_cast<double>(nr);
      for (std::size_t c = 0; c < k1; ++c) {
        g_logits[r * k1 + c] = ce.grad[c] / static_cast<double>(nr) * grad_scale;
      }
      if (label == 0) continue;
      const geometry::BoxDelta& t = plan.rois[r].target;
      const double target[4] = {t.dx, t.dy, t.dw, t.dh};
      const std::size_t base = r * ho.deltas.dim(1) + 4 * (label - 1);
      for (std::size_t q = 0; q < 4; ++q) {
        const double d = ho.deltas[base + q] - target[q];
        out.head_reg += numerics::smooth_l1_value(d) / static_cast<double>(n_fg);
        g_hdeltas[base + q] = numerics::smooth_l1_grad(d) / static_cast<double>(n_fg) * grad_scale;
      }
    }
    if (backward) {
      const Tensor g_roi = head_backward(model, hc, g_logits, g_hdeltas, roi.output.shape());
      g_features = roi_features_backward(state.features, boxes, stride, cfg.roi, roi, g_roi);
    }
  }
  if (!backward) return out;
  Tensor g = rpn_backward(model, state.rpn_cache, g_scores, g_deltas);
  if (!g_features.empty()) numerics::add_inplace(g, g_features);
  backbone_backward(model, state.backbone, g);
  return out;
}

}  // namespace docdet::detector

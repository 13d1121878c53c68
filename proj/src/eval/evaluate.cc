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

#include "docdet/eval/evaluate.h"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "docdet/error.h"
#include "docdet/eval/metrics.h"
#include "docdet/util/parallel.h"

namespace docdet::eval {
namespace {

std::string listing(const geometry::LabelSet& labels) {
  std::string out;
  for (const auto& n : labels.names()) out += (out.empty() ? "" : ", ") + n;
  return out;
}

void check_labels(std::span<const Detection> preds, std::span<const GroundTruth> gts,
                  const geometry::LabelSet& labels) {
  const auto n = static_cast<geometry::ClassId>(labels.size());
  for (const auto& p : preds) {
    if (p.label < 0 || p.label >= n) {
      throw DataError("prediction label id " + std::to_string(p.label) +
                      " is not in the label set (" + listing(labels) + ")");
    }
  }
  for (const auto& g : gts) {
    if (g.label < 0 || g.label >= n) {
      throw DataError("ground-truth label id " + std::to_string(g.label) +
                      " is not in the label set (" + listing(labels) + ")");
    }
  }
}

}  // namespace

void EvalOptions::validate() const {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw ConfigError("IoU threshold must lie in (0, 1]");
  }
  if (!(score_threshold >= 0.0 && score_threshold <= 1.0)) {
    throw ConfigError("score threshold must lie in [0, 1]");
  }
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
}

EvalReport evaluate(std::span<const Detection> preds, std::span<const GroundTruth> gts,
                    const geometry::LabelSet& labels, const EvalOptions& opts) {
  opts.validate();
  if (labels.empty()) throw ConfigError("evaluation needs a non-empty label set");
  check_labels(preds, gts, labels);
  EvalReport report;
  report.iou_threshold = opts.iou_threshold;
  report.score_threshold = opts.score_threshold;
  report.classes.resize(labels.size());
  util::parallel_for(labels.size(), opts.jobs, [&](std::size_t c) {
    const auto label = static_cast<geometry::ClassId>(c);
    const MatchResult m = match_detections(preds, gts, opts.iou_threshold, label);
    ClassMetrics& cm = report.classes[c];
    cm.label = labels.name(label);
    cm.n_gt = m.n_gt;
    cm.ap = average_precision(m.flags, m.n_gt);
    // Matching is score-ordered, so the operating point is a prefix.
    for (const RankedFlag& f : m.flags) {
      if (f.score < opts.score_threshold) break;
      (f.tp ? cm.tp : cm.fp) += 1;
    }
    cm.fn = m.n_gt - cm.tp;
    const PrecisionRecallF1 prf = precision_recall_f1(cm.tp, cm.fp, cm.fn);
    cm.precision = prf.precision;
    cm.recall = prf.recall;
    cm.f1 = prf.f1;
  });
  std::vector<double> aps, f1s;
  for (const auto& c : report.classes) {
    aps.push_back(c.ap);
    f1s.push_back(c.f1);
  }
  report.map = mean_ap(aps);
  report.ave_f1 = mean_ap(f1s);
  return report;
}

std::vector<EvalReport> threshold_sweep(std::span<const Detection> preds,
                                        std::span<const GroundTruth> gts,
                                        const geometry::LabelSet& labels,
                                        std::span<const double> thresholds,
                                        const EvalOptions& opts) {
  if (thresholds.empty()) throw ConfigError("threshold sweep needs at least one threshold");
  for (std::size_t i = 1; i < thresholds.size(); ++i) {
    if (!(thresholds[i] > thresholds[i - 1])) {
      throw ConfigError("sweep thresholds must be strictly ascending");
    }
  }
  std::vector<EvalReport> out;
  for (double t : thresholds) {
    EvalOptions o = opts;
    o.iou_threshold = t;
    out.push_back(evaluate(preds, gts, labels, o));
  }
  return out;
}

ResolvedSet resolve(std::span<const Prediction> preds, const data::DatasetManifest& gt) {
  ResolvedSet out;
  std::unordered_map<std::string, std::size_t> image_index;
  for (std::size_t i = 0; i < gt.entries.size(); ++i) {
    image_index.emplace(gt.entries[i].id, i);
    for (const auto& a : gt.entries[i].objects) out.gts.push_back({i, a.label, a.box});
  }
  std::set<std::string> unknown_labels;
  std::set<std::string> unknown_images;
  for (const Prediction& p : preds) {
    const auto label = gt.labels.find(p.label);
    const auto img = image_index.find(p.image);
    if (!label) unknown_labels.insert(p.label);
    if (img == image_index.end()) unknown_images.insert(p.image);
    if (!label || img == image_index.end()) continue;
    out.preds.push_back({img->second, *label, p.score, p.box});
  }
  if (!unknown_labels.empty()) {
    std::string msg = "predictions use labels outside the ground-truth set (" +
                      listing(gt.labels) + "):";
    for (const auto& l : unknown_labels) msg += " '" + l + "'";
    throw DataError(msg);
  }
  if (!unknown_images.empty()) {
    std::string msg = "predictions reference images missing from the ground truth:";
    std::size_t shown = 0;
    for (const auto& i : unknown_images) {
      if (++shown > 10) {
        msg += " ...";
        break;
      }
      msg += " '" + i + "'";
    }
    throw DataError(msg);
  }
  return out;
}

}  // namespace docdet::eval

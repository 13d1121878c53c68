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

#ifndef DOCDET_EVAL_EVALUATE_H_
#define DOCDET_EVAL_EVALUATE_H_

#include <span>
#include <string>
#include <vector>

#include "docdet/data/manifest.h"
#include "docdet/eval/matching.h"
#include "docdet/geometry/box.h"

namespace docdet::eval {

struct ClassMetrics {
  std::string label;
  double ap = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  // Counts at the operating score threshold.
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t n_gt = 0;
};

struct EvalReport {
  std::vector<ClassMetrics> classes;  // label-set order
  double map = 0.0;                   // unweighted mean of ap
  double ave_f1 = 0.0;                // unweighted mean of f1
  double iou_threshold = 0.5;
  double score_threshold = 0.5;
};

struct EvalOptions {
  double iou_threshold = 0.5;
  // Detections scoring >= this count toward P/R/F1. AP uses all of them.
  double score_threshold = 0.5;
  int jobs = 1;

  void validate() const;
};

// Labels outside `labels` raise DataError naming the known labels.
EvalReport evaluate(std::span<const Detection> preds, std::span<const GroundTruth> gts,
                    const geometry::LabelSet& labels, const EvalOptions& opts = {});

// One report per threshold; thresholds must be strictly ascending.
std::vector<EvalReport> threshold_sweep(std::span<const Detection> preds,
                                        std::span<const GroundTruth> gts,
                                        const geometry::LabelSet& labels,
                                        std::span<const double> thresholds,
                                        const EvalOptions& opts = {});

// Predictions as stored on disk: image id and label name.
struct Prediction {
  std::string image;
  std::string label;
  double score = 0.0;
  geometry::Box box;

  bool operator==(const Prediction&) const = default;
};

struct ResolvedSet {
  std::vector<Detection> preds;
  std::vector<GroundTruth> gts;
};

// Maps ids and names onto indices of `gt`. Unknown labels or image ids
// raise DataError.
ResolvedSet resolve(std::span<const Prediction> preds, const data::DatasetManifest& gt);

}  // namespace docdet::eval

#endif  // DOCDET_EVAL_EVALUATE_H_

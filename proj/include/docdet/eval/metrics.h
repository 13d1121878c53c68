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

#ifndef DOCDET_EVAL_METRICS_H_
#define DOCDET_EVAL_METRICS_H_

#include <cstddef>
#include <span>

#include "docdet/eval/matching.h"

namespace docdet::eval {

// All-point interpolated AP: area under the precision envelope over
// recall. Zero when n_gt == 0.
double average_precision(std::span<const RankedFlag> flags, std::size_t n_gt);

// Unweighted mean; throws ConfigError on empty input.
double mean_ap(std::span<const double> per_class_ap);

struct PrecisionRecallF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// 0/0 ratios are defined as 0.
PrecisionRecallF1 precision_recall_f1(std::size_t tp, std::size_t fp, std::size_t fn);
double f1_score(double precision, double recall);

}  // namespace docdet::eval

#endif  // DOCDET_EVAL_METRICS_H_

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

#ifndef DOCDET_EVAL_REPORT_H_
#define DOCDET_EVAL_REPORT_H_

#include <span>
#include <string>

#include "docdet/eval/evaluate.h"

namespace docdet::eval {

// Aligned text table: one row per class and a closing "mean" row.
std::string format_report_table(const EvalReport& r);

// CSV with header
//   iou_threshold,score_threshold,class,ap,precision,recall,f1,tp,fp,fn,n_gt
// one row per class, then a row with class "mean" whose ap is the mAP, f1 is
// the Ave F1, precision/recall are unweighted means and counts are sums.
// Several reports (a sweep) are concatenated under one header.
std::string format_report_csv(std::span<const EvalReport> reports);

// "iou=0.50 mAP=0.8123 AveF1=0.7912"
std::string summary_line(const EvalReport& r);

// Sweep overview: iou_threshold,map,ave_f1 per row.
std::string format_sweep_csv(std::span<const EvalReport> reports);

}  // namespace docdet::eval

#endif  // DOCDET_EVAL_REPORT_H_

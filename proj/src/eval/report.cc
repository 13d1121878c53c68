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

#include "docdet/eval/report.h"

#include <cstdio>
#include <string_view>

namespace docdet::eval {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

struct Totals {
  double precision = 0, recall = 0;
  std::size_t tp = 0, fp = 0, fn = 0, n_gt = 0;
};

Totals totals(const EvalReport& r) {
  Totals t;
  for (const auto& c : r.classes) {
    t.precision += c.precision;
    t.recall += c.recall;
    t.tp += c.tp;
    t.fp += c.fp;
    t.fn += c.fn;
    t.n_gt += c.n_gt;
  }
  if (!r.classes.empty()) {
    t.precision /= static_cast<double>(r.classes.size());
    t.recall /= static_cast<double>(r.classes.size());
  }
  return t;
}

}  // namespace

std::string format_report_table(const EvalReport& r) {
  std::string out = "IoU threshold " + fmt("%.2f", r.iou_threshold) + ", score threshold " +
                    fmt("%.2f", r.score_threshold) + "\n";
  char line[256];
  std::snprintf(line, sizeof(line), "%-12s %7s %9s %7s %7s %6s %6s %6s %6s\n", "class", "AP",
                "precision", "recall", "F1", "TP", "FP", "FN", "GT");
  out += line;
  for (const auto& c : r.classes) {
    std::snprintf(line, sizeof(line), "%-12s %7.4f %9.4f %7.4f %7.4f %6zu %6zu %6zu %6zu\n",
                  c.label.c_str(), c.ap, c.precision, c.recall, c.f1, c.tp, c.fp, c.fn, c.n_gt);
    out += line;
  }
  const Totals t = totals(r);
  std::snprintf(line, sizeof(line), "%-12s %7.4f %9.4f %7.4f %7.4f %6zu %6zu %6zu %6zu\n", "mean",
                r.map, t.precision, t.recall, r.ave_f1, t.tp, t.fp, t.fn, t.n_gt);
  out += line;
  return out;
}

std::string format_report_csv(std::span<const EvalReport> reports) {
  std::string out = "iou_threshold,score_threshold,class,ap,precision,recall,f1,tp,fp,fn,n_gt\n";
  auto row = [&](const EvalReport& r, std::string_view name, double ap, double p, double rc,
                 double f1, std::size_t tp, std::size_t fp, std::size_t fn, std::size_t n_gt) {
    out += fmt("%.4g", r.iou_threshold) + "," + fmt("%.4g", r.score_threshold) + "," +
           std::string(name) + "," + fmt("%.6f", ap) + "," + fmt("%.6f", p) + "," +
           fmt("%.6f", rc) + "," + fmt("%.6f", f1) + "," + std::to_string(tp) + "," +
           std::to_string(fp) + "," + std::to_string(fn) + "," + std::to_string(n_gt) + "\n";
  };
  for (const EvalReport& r : reports) {
    for (const auto& c : r.classes) {
      row(r, c.label, c.ap, c.precision, c.recall, c.f1, c.tp, c.fp, c.fn, c.n_gt);
    }
    const Totals t = totals(r);
    row(r, "mean", r.map, t.precision, t.recall, r.ave_f1, t.tp, t.fp, t.fn, t.n_gt);
  }
  return out;
}

std::string summary_line(const EvalReport& r) {
  return "iou=" + fmt("%.2f", r.iou_threshold) + " mAP=" + fmt("%.4f", r.map) +
         " AveF1=" + fmt("%.4f", r.ave_f1);
}

std::string format_sweep_csv(std::span<const EvalReport> reports) {
  std::string out = "iou_threshold,map,ave_f1\n";
  for (const auto& r : reports) {
    out += fmt("%.4g", r.iou_threshold) + "," + fmt("%.6f", r.map) + "," +
           fmt("%.6f", r.ave_f1) + "\n";
  }
  return out;
}

}  // namespace docdet::eval

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

#ifndef DOCDET_EVAL_PREDICTIONS_H_
#define DOCDET_EVAL_PREDICTIONS_H_

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "docdet/eval/evaluate.h"

namespace docdet::eval {

// One JSON object per line:
//   {"image": id, "label": name, "score": s, "x_min": .., "y_min": ..,
//    "x_max": .., "y_max": ..}
// Blank lines are skipped. Errors carry the line number.
std::vector<Prediction> parse_predictions(std::string_view text, const std::string& origin);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

std::string format_prediction(const Prediction& p);
void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds);

}  // namespace docdet::eval

#endif  // DOCDET_EVAL_PREDICTIONS_H_

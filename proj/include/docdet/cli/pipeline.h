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

#ifndef DOCDET_CLI_PIPELINE_H_
#define DOCDET_CLI_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "docdet/data/image.h"
#include "docdet/data/manifest.h"
#include "docdet/data/synth.h"
#include "docdet/detector/inference.h"
#include "docdet/detector/model.h"
#include "docdet/eval/evaluate.h"

namespace docdet::cli {

// Pages first_index .. first_index + count - 1 of `cfg`, written as
// dir/images/<id>.png plus dir/<name>.json. Returns the saved manifest.
data::DatasetManifest write_synthetic_dataset(const data::SynthConfig& cfg,
                                              std::uint64_t first_index, int count,
                                              const std::filesystem::path& dir,
                                              const std::string& name, data::Split split,
                                              int jobs);

// Pages generated in memory, no files.
std::vector<data::AnnotatedDocument> synthetic_documents(const data::SynthConfig& cfg,
                                                         std::uint64_t first_index, int count,
                                                         int jobs);

std::vector<data::AnnotatedDocument> load_documents(const data::DatasetManifest& m, int jobs);

// Detections per document, in document order.
std::vector<std::vector<geometry::ScoredBox>> detect_all(
    const detector::DetectorModel& model, const std::vector<data::AnnotatedDocument>& docs,
    const detector::DetectOptions& opts, int jobs);

std::vector<eval::Prediction> to_predictions(
    const std::vector<data::AnnotatedDocument>& docs,
    const std::vector<std::vector<geometry::ScoredBox>>& detections,
    const geometry::LabelSet& labels);

// Detect on every document and score against its annotations.
eval::EvalReport evaluate_model(const detector::DetectorModel& model,
                                const std::vector<data::AnnotatedDocument>& docs,
                                const detector::DetectOptions& detect_opts,
                                const eval::EvalOptions& eval_opts);

}  // namespace docdet::cli

#endif  // DOCDET_CLI_PIPELINE_H_

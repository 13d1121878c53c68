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

#include "docdet/cli/pipeline.h"

#include "docdet/data/png_io.h"
#include "docdet/util/parallel.h"

namespace docdet::cli {

std::vector<data::AnnotatedDocument> synthetic_documents(const data::SynthConfig& cfg,
                                                         std::uint64_t first_index, int count,
                                                         int jobs) {
  cfg.validate();
  std::vector<data::AnnotatedDocument> docs(static_cast<std::size_t>(std::max(count, 0)));
  util::parallel_for(docs.size(), jobs, [&](std::size_t i) {
    docs[i] = data::synth_page(cfg, first_index + i);
  });
  return docs;
}

data::DatasetManifest write_synthetic_dataset(const data::SynthConfig& cfg,
                                              std::uint64_t first_index, int count,
                                              const std::filesystem::path& dir,
                                              const std::string& name, data::Split split,
                                              int jobs) {
  std::filesystem::create_directories(dir / "images");
  data::DatasetManifest m;
  m.name = name;
  m.labels = geometry::LabelSet::document_objects();
  m.split = split;
  m.base_dir = dir;
  m.entries.resize(static_cast<std::size_t>(std::max(count, 0)));
  util::parallel_for(m.entries.size(), jobs, [&](std::size_t i) {
    const data::AnnotatedDocument doc = data::synth_page(cfg, first_index + i);
    const std::string rel = "images/" + doc.id + ".png";
    data::write_png(dir / rel, doc.image);
    m.entries[i] = {doc.id, rel, doc.image.width(), doc.image.height(), doc.annotations};
  });
  data::save_manifest(m, dir / (name + ".json"));
  return m;
}

std::vector<data::AnnotatedDocument> load_documents(const data::DatasetManifest& m, int jobs) {
  std::vector<data::AnnotatedDocument> docs(m.entries.size());
  util::parallel_for(docs.size(), jobs, [&](std::size_t i) { docs[i] = data::load_document(m, i); });
  return docs;
}

std::vector<std::vector<geometry::ScoredBox>> detect_all(
    const detector::DetectorModel& model, const std::vector<data::AnnotatedDocument>& docs,
    const detector::DetectOptions& opts, int jobs) {
  opts.validate();
  std::vector<std::vector<geometry::ScoredBox>> out(docs.size());
  util::parallel_for(docs.size(), jobs, [&](std::size_t i) {
    out[i] = detector::detect(model, docs[i].image, opts);
  });
  return out;
}

std::vector<eval::Prediction> to_predictions(
    const std::vector<data::AnnotatedDocument>& docs,
    const std::vector<std::vector<geometry::ScoredBox>>& detections,
    const geometry::LabelSet& labels) {
  std::vector<eval::Prediction> out;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (const geometry::ScoredBox& d : detections[i]) {
      out.push_back({docs[i].id, labels.name(d.label), d.score, d.box});
    }
  }
  return out;
}

eval::EvalReport evaluate_model(const detector::DetectorModel& model,
                                const std::vector<data::AnnotatedDocument>& docs,
                                const detector::DetectOptions& detect_opts,
                                const eval::EvalOptions& eval_opts) {
  const auto dets = detect_all(model, docs, detect_opts, eval_opts.jobs);
  std::vector<eval::Detection> preds;
  std::vector<eval::GroundTruth> gts;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    for (const geometry::ScoredBox& d : dets[i]) preds.push_back({i, d.label, d.score, d.box});
    for (const data::Annotation& a : docs[i].annotations) gts.push_back({i, a.label, a.box});
  }
  return eval::evaluate(preds, gts, model.config.labels, eval_opts);
}

}  // namespace docdet::cli

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

#include "docdet/detector/train.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>

#include "docdet/detector/preprocess.h"
#include "docdet/detector/serialize.h"
#include "docdet/error.h"
#include "docdet/util/atomic_file.h"

namespace docdet::detector {

void TrainOptions::validate() const {
  hp.validate();
  if (epochs < 1) throw ConfigError("epochs must be >= 1");
  if (max_steps < 0) throw ConfigError("max_steps must be >= 0");
}

namespace {

void check_documents(const DetectorModel& model, const std::vector<data::AnnotatedDocument>& docs) {
  if (docs.empty()) throw DataError("training set is empty");
  const auto k = static_cast<int>(model.config.labels.size());
  for (const data::AnnotatedDocument& d : docs) {
    for (std::size_t i = 0; i < d.annotations.size(); ++i) {
      const data::Annotation& a = d.annotations[i];
      if (a.label < 0 || a.label >= k) {
        throw DataError("document '" + d.id + "' object " + std::to_string(i) + ": label " +
                        std::to_string(a.label) + " is outside the model's " +
                        std::to_string(k) + " classes");
      }
      if (!a.box.valid()) {
        throw DataError("document '" + d.id + "' object " + std::to_string(i) + ": invalid box");
      }
    }
  }
}

void add(LossBreakdown& a, const LossBreakdown& b, double s) {
  a.rpn_cls += s * b.rpn_cls;
  a.rpn_reg += s * b.rpn_reg;
  a.head_cls += s * b.head_cls;
  a.head_reg += s * b.head_reg;
}

}  // namespace

LossBreakdown evaluate_loss(DetectorModel& model, const data::AnnotatedDocument& doc,
                            std::mt19937_64& rng) {
  const PreparedImage prep = preprocess(doc, model.config.input_size);
  const ForwardState state = forward_features(model, prep.image);
  const TrainingPlan plan = build_plan(model, state, prep.annotations, rng);
  return loss_and_backward(model, state, plan, false);
}

TrainResult train(DetectorModel& model, const std::vector<data::AnnotatedDocument>& docs,
                  const TrainOptions& opts) {
  opts.validate();
  check_documents(model, docs);
  std::mt19937_64 rng(opts.seed);
  numerics::SgdOptimizer optimizer(opts.hp.momentum);
  const std::vector<numerics::Parameter*> params = model.parameters();
  model.zero_grad();

  std::vector<std::size_t> order(docs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto batch = static_cast<std::size_t>(opts.hp.batch_size);
  TrainResult result;
  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    if (opts.max_steps > 0 && result.steps >= opts.max_steps) break;
    const double lr = numerics::lr_schedule(opts.hp, epoch);
    std::shuffle(order.begin(), order.end(), rng);
    EpochRecord rec{epoch, lr, {}, 0};
    std::size_t seen = 0;
    for (std::size_t start = 0; start < order.size(); start += batch) {
      if (opts.max_steps > 0 && result.steps >= opts.max_steps) break;
      const std::size_t end = std::min(start + batch, order.size());
      const double scale = 1.0 / static_cast<double>(end - start);
      for (std::size_t b = start; b < end; ++b) {
        const data::AnnotatedDocument& doc = docs[order[b]];
        const PreparedImage prep = preprocess(doc, model.config.input_size);
        const ForwardState state = forward_features(model, prep.image);
        const TrainingPlan plan = build_plan(model, state, prep.annotations, rng);
        const LossBreakdown l = loss_and_backward(model, state, plan, true, scale);
        if (!std::isfinite(l.total())) {
          throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + " on document '" +
                             doc.id + "'");
        }
        add(rec.loss, l, 1.0);
        ++seen;
      }
      optimizer.step(params, lr);
      ++rec.steps;
      ++result.steps;
    }
    if (seen > 0) {
      LossBreakdown mean;
      add(mean, rec.loss, 1.0 / static_cast<double>(seen));
      rec.loss = mean;
    }
    result.trace.push_back(rec);
    if (!opts.checkpoint_dir.empty()) {
      std::filesystem::create_directories(opts.checkpoint_dir);
      char name[32];
      std::snprintf(name, sizeof name, "epoch_%03d.ckpt", epoch);
      save_model(opts.checkpoint_dir / name, model);
    }
    if (!opts.loss_trace.empty()) {
      util::write_text_atomically(opts.loss_trace, format_loss_trace(result.trace));
    }
    if (opts.on_epoch) opts.on_epoch(rec);
    if (opts.stop_after && opts.stop_after(rec)) break;
  }
  return result;
}

std::string format_loss_trace(const std::vector<EpochRecord>& trace) {
  std::string out = "epoch,lr,rpn_cls,rpn_reg,head_cls,head_reg,total\n";
  char line[256];
  for (const EpochRecord& r : trace) {
    std::snprintf(line, sizeof line, "%d,%.10g,%.8f,%.8f,%.8f,%.8f,%.8f\n", r.epoch, r.lr,
                  r.loss.rpn_cls, r.loss.rpn_reg, r.loss.head_cls, r.loss.head_reg, r.loss.total());
    out += line;
  }
  return out;
}

DetectorModel prepare_fine_tune(DetectorModel model, const geometry::LabelSet& labels,
                                std::uint64_t seed) {
  if (!(labels == model.config.labels)) {
    model.config.labels = labels;
    model.config.validate();
    reinit_class_layers(model, seed);
  }
  return model;
}

FineTuneResult fine_tune(const std::filesystem::path& checkpoint, const geometry::LabelSet& labels,
                         const std::vector<data::AnnotatedDocument>& docs, const TrainOptions& opts) {
  FineTuneResult r{prepare_fine_tune(load_model(checkpoint), labels, opts.seed), {}};
  r.train = train(r.model, docs, opts);
  return r;
}

}  // namespace docdet::detector

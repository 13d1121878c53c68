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

#ifndef DOCDET_DETECTOR_TRAIN_H_
#define DOCDET_DETECTOR_TRAIN_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "docdet/data/image.h"
#include "docdet/detector/losses.h"
#include "docdet/detector/model.h"
#include "docdet/numerics/optim.h"

namespace docdet::detector {

struct EpochRecord {
  int epoch = 0;
  double lr = 0.0;
  LossBreakdown loss;  // mean per image over the epoch
  long steps = 0;      // optimizer steps taken in this epoch
};

struct TrainOptions {
  numerics::TrainHyperparams hp;
  int epochs = 10;
  std::uint64_t seed = 1;
  // When set, epoch_NNN.ckpt is written here after every epoch.
  std::filesystem::path checkpoint_dir;
  // When set, the CSV loss trace is rewritten after every epoch.
  std::filesystem::path loss_trace;
  // Stop after this many optimizer steps in total (0: no limit).
  long max_steps = 0;
  std::function<void(const EpochRecord&)> on_epoch;
  // Checked after every epoch (after on_epoch); true ends training there.
  std::function<bool(const EpochRecord&)> stop_after;
  void validate() const;
};

struct TrainResult {
  std::vector<EpochRecord> trace;
  long steps = 0;
};

// Minibatch SGD over the documents, reshuffled every epoch. Gradients are
// averaged over the batch. Deterministic in opts.seed.
TrainResult train(DetectorModel& model, const std::vector<data::AnnotatedDocument>& docs,
                  const TrainOptions& opts);

// Loss of one document under a fresh plan, without touching gradients.
LossBreakdown evaluate_loss(DetectorModel& model, const data::AnnotatedDocument& doc,
                            std::mt19937_64& rng);

// Header epoch,lr,rpn_cls,rpn_reg,head_cls,head_reg,total.
std::string format_loss_trace(const std::vector<EpochRecord>& trace);

// Adapts a pretrained model to `labels`: the class-dependent head layers
// are redrawn when the label set differs, everything else is kept.
DetectorModel prepare_fine_tune(DetectorModel pretrained, const geometry::LabelSet& labels,
                                std::uint64_t seed);

struct FineTuneResult {
  DetectorModel model;
  TrainResult train;
};
FineTuneResult fine_tune(const std::filesystem::path& checkpoint,
                         const geometry::LabelSet& labels,
                         const std::vector<data::AnnotatedDocument>& docs, const TrainOptions& opts);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_TRAIN_H_

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

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "docdet/data/synth.h"
#include "docdet/detector/serialize.h"
#include "docdet/detector/train.h"
#include "docdet/error.h"
#include "test_util.h"

namespace docdet::detector {
namespace {

std::vector<data::AnnotatedDocument> pages(std::uint64_t seed, int n) {
  data::SynthConfig cfg;
  cfg.seed = seed;
  std::vector<data::AnnotatedDocument> out;
  for (int i = 0; i < n; ++i) out.push_back(data::synth_page(cfg, static_cast<std::uint64_t>(i)));
  return out;
}

// The full architecture at a quarter of the input area, for fast runs.
DetectorConfig quick_config() {
  DetectorConfig c;
  c.input_size = 288;
  return c;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Ten pages, twenty epochs at the full input size, default hyperparameters.
class TenPageRun : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    docs_ = new std::vector<data::AnnotatedDocument>(pages(5, 10));
    model_ = new DetectorModel(create_model(DetectorConfig(), 1));
    TrainOptions o;
    o.epochs = 20;
    o.seed = 3;
    result_ = new TrainResult(train(*model_, *docs_, o));
  }
  static void TearDownTestSuite() {
    delete docs_;
    delete model_;
    delete result_;
  }
  static std::vector<data::AnnotatedDocument>* docs_;
  static DetectorModel* model_;
  static TrainResult* result_;
};
std::vector<data::AnnotatedDocument>* TenPageRun::docs_ = nullptr;
DetectorModel* TenPageRun::model_ = nullptr;
TrainResult* TenPageRun::result_ = nullptr;

TEST_F(TenPageRun, LossDecreases) {
  ASSERT_EQ(result_->trace.size(), 20u);
  EXPECT_LT(result_->trace.back().loss.total(), result_->trace.front().loss.total());
  EXPECT_EQ(result_->steps, 20 * 3);  // ceil(10 / 4) steps per epoch
}

TEST_F(TenPageRun, LearningRateDecaysEveryFiveEpochs) {
  EXPECT_DOUBLE_EQ(result_->trace[0].lr, 0.001);
  EXPECT_DOUBLE_EQ(result_->trace[4].lr, 0.001);
  EXPECT_DOUBLE_EQ(result_->trace[5].lr, 0.0001);
  EXPECT_DOUBLE_EQ(result_->trace[10].lr, 0.00001);
}

TEST_F(TenPageRun, FineTuneFromCheckpointStartsNearFinalLoss) {
  testing::TempDir dir("ft-same");
  save_model(dir / "pre.ckpt", *model_);
  DetectorModel start = prepare_fine_tune(load_model(dir / "pre.ckpt"), model_->config.labels, 3);
  std::mt19937_64 rng(3);
  double start_loss = 0.0;
  for (const auto& d : *docs_) start_loss += evaluate_loss(start, d, rng).total();
  start_loss /= static_cast<double>(docs_->size());
  const double initial = result_->trace.front().loss.total();
  const double final_loss = result_->trace.back().loss.total();
  // Within a quarter of the distance training covered, far from scratch.
  EXPECT_LT(std::abs(start_loss - final_loss), 0.25 * (initial - final_loss))
      << "initial " << initial << " final " << final_loss << " checkpoint " << start_loss;
}

TEST(TrainTest, SameSeedSameParameters) {
  const auto docs = pages(7, 6);
  TrainOptions o;
  o.epochs = 2;
  o.seed = 11;
  o.hp.momentum = 0.9;
  DetectorModel a = create_model(quick_config(), 2);
  DetectorModel b = create_model(quick_config(), 2);
  train(a, docs, o);
  train(b, docs, o);
  EXPECT_EQ(parameter_checksum(a), parameter_checksum(b));
  DetectorModel c = create_model(quick_config(), 2);
  o.seed = 12;
  train(c, docs, o);
  EXPECT_NE(parameter_checksum(a), parameter_checksum(c));
}

TEST(TrainTest, WritesCheckpointsAndTrace) {
  testing::TempDir dir("train-out");
  const auto docs = pages(8, 3);
  TrainOptions o;
  o.epochs = 2;
  o.checkpoint_dir = dir / "ckpt";
  o.loss_trace = dir / "trace.csv";
  std::vector<int> seen;
  o.on_epoch = [&](const EpochRecord& r) { seen.push_back(r.epoch); };
  DetectorModel m = create_model(quick_config(), 1);
  const TrainResult r = train(m, docs, o);
  EXPECT_EQ(seen, (std::vector<int>{0, 1}));
  EXPECT_TRUE(std::filesystem::exists(dir / "ckpt" / "epoch_000.ckpt"));
  ASSERT_TRUE(std::filesystem::exists(dir / "ckpt" / "epoch_001.ckpt"));
  EXPECT_EQ(parameter_checksum(load_model(dir / "ckpt" / "epoch_001.ckpt")), parameter_checksum(m));
  const std::string csv = read_file(dir / "trace.csv");
  EXPECT_EQ(csv, format_loss_trace(r.trace));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "epoch,lr,rpn_cls,rpn_reg,head_cls,head_reg,total");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

TEST(TrainTest, MaxStepsStopsEarly) {
  const auto docs = pages(9, 8);
  TrainOptions o;
  o.epochs = 5;
  o.max_steps = 3;
  DetectorModel m = create_model(quick_config(), 1);
  const TrainResult r = train(m, docs, o);
  EXPECT_EQ(r.steps, 3);
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_EQ(r.trace[0].steps, 2);
  EXPECT_EQ(r.trace[1].steps, 1);
}

TEST(TrainTest, StopAfterEndsAtThatEpoch) {
  const auto docs = pages(9, 2);
  TrainOptions o;
  o.epochs = 6;
  o.stop_after = [](const EpochRecord& r) { return r.epoch == 1; };
  DetectorModel m = create_model(quick_config(), 1);
  const TrainResult r = train(m, docs, o);
  EXPECT_EQ(r.trace.size(), 2u);
}

TEST(TrainTest, InputErrorsNameTheDocument) {
  DetectorModel m = create_model(quick_config(), 1);
  TrainOptions o;
  o.epochs = 1;
  EXPECT_THROW(train(m, {}, o), DataError);
  auto docs = pages(1, 2);
  docs[1].annotations.push_back({{1, 1, 20, 20}, 7});
  try {
    train(m, docs, o);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(docs[1].id), std::string::npos) << e.what();
  }
  o.epochs = 0;
  EXPECT_THROW(train(m, pages(1, 1), o), ConfigError);
}

TEST(TrainTest, FineTuneToTableOnlyChangesHeadWidth) {
  testing::TempDir dir("ft-table");
  save_model(dir / "pre.ckpt", create_model(quick_config(), 4));
  auto docs = pages(3, 2);
  for (auto& d : docs) {
    std::erase_if(d.annotations, [](const data::Annotation& a) { return a.label != 0; });
  }
  TrainOptions o;
  o.epochs = 1;
  const FineTuneResult r = fine_tune(dir / "pre.ckpt", geometry::LabelSet({"table"}), docs, o);
  EXPECT_EQ(r.model.head_cls.weight.value.dim(0), 2u);
  EXPECT_EQ(r.model.config.labels, geometry::LabelSet({"table"}));
}

TEST(TrainTest, FineTuneRejectsCorruptCheckpoint) {
  testing::TempDir dir("ft-corrupt");
  std::ofstream(dir / "bad.ckpt") << "DOCDETCK garbage";
  TrainOptions o;
  EXPECT_THROW(fine_tune(dir / "bad.ckpt", geometry::LabelSet::document_objects(), pages(1, 1), o),
               DataError);
}

}  // namespace
}  // namespace docdet::detector

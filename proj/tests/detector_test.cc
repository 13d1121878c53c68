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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>

#include "docdet/data/synth.h"
#include "docdet/detector/backbone.h"
#include "docdet/detector/config.h"
#include "docdet/detector/head.h"
#include "docdet/detector/inference.h"
#include "docdet/detector/losses.h"
#include "docdet/detector/model.h"
#include "docdet/detector/preprocess.h"
#include "docdet/detector/proposals.h"
#include "docdet/detector/roi.h"
#include "docdet/detector/rpn.h"
#include "docdet/detector/serialize.h"
#include "docdet/detector/targets.h"
#include "docdet/detector/train.h"
#include "docdet/error.h"
#include "docdet/geometry/anchors.h"
#include "docdet/geometry/delta.h"
#include "docdet/gradcheck/suites.h"
#include "docdet/numerics/checkpoint.h"
#include "docdet/numerics/losses.h"
#include "test_util.h"

namespace docdet::detector {
namespace {

using geometry::Box;
using numerics::Tensor;

Tensor ramp_4x4() {
  Tensor f({1, 4, 4});
  for (std::size_t i = 0; i < 16; ++i) f[i] = static_cast<double>(i + 1);
  return f;
}

RoiConfig roi_cfg(RoiMode mode, int oh, int ow, int samples = 2) {
  RoiConfig c;
  c.mode = mode;
  c.output_h = oh;
  c.output_w = ow;
  c.samples_per_bin = samples;
  return c;
}

// ---------------------------------------------------------------- config

TEST(ConfigTest, PresetsHaveStride16AndEndInConv) {
  for (const char* name : {"tiny", "small"}) {
    const BackboneConfig b = BackboneConfig::from_preset(name);
    EXPECT_NO_THROW(b.validate()) << name;
    EXPECT_EQ(b.total_stride(), 16) << name;
    EXPECT_EQ(b.layers.back().kind, LayerSpec::Kind::kConv) << name;
    const auto [h, w] = b.feature_size(600, 600);
    EXPECT_GE(h, 37) << name;
    EXPECT_EQ(h, w);
  }
  EXPECT_EQ(BackboneConfig::from_preset("tiny").conv_count(), 4u);
  EXPECT_EQ(BackboneConfig::from_preset("small").conv_count(), 8u);
  EXPECT_THROW(BackboneConfig::from_preset("vgg16"), ConfigError);
}

TEST(ConfigTest, ValidationNamesTheProblem) {
  DetectorConfig c;
  c.anchors.stride = 8;
  try {
    c.validate();
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("stride"), std::string::npos);
  }
  c = DetectorConfig();
  c.backbone.layers.push_back({LayerSpec::Kind::kMaxPool, 0, 2, 2, 0, false});
  EXPECT_THROW(c.backbone.validate(), ConfigError);
  EXPECT_NO_THROW(DetectorConfig::toy().validate());
}

// ---------------------------------------------------------------- model

TEST(ModelTest, OutputWidthsFollowAnchorsAndClasses) {
  const DetectorModel m = create_model(DetectorConfig(), 3);
  EXPECT_EQ(m.config.anchors.per_location(), 30u);
  EXPECT_EQ(m.rpn_cls.weight.value.dim(0), 60u);
  EXPECT_EQ(m.rpn_reg.weight.value.dim(0), 120u);
  EXPECT_EQ(m.head_cls.weight.value.dim(0), 4u);  // table, figure, equation, background
  EXPECT_EQ(m.head_reg.weight.value.dim(0), 12u);
  EXPECT_EQ(m.backbone.size(), 4u);
}

TEST(ModelTest, DeterministicInSeed) {
  const DetectorModel a = create_model(DetectorConfig::toy(), 5);
  const DetectorModel b = create_model(DetectorConfig::toy(), 5);
  const DetectorModel c = create_model(DetectorConfig::toy(), 6);
  EXPECT_EQ(parameter_checksum(a), parameter_checksum(b));
  EXPECT_NE(parameter_checksum(a), parameter_checksum(c));
}

// ---------------------------------------------------------------- preprocess

TEST(PreprocessTest, SameSizeKeepsGeometryAndPixels) {
  data::DocumentImage img(600, 600);
  img.set(10, 20, {0, 51, 255});
  const data::AnnotatedDocument doc{"p", img, {{{5, 6, 70, 80}, 1}}};
  const PreparedImage p = preprocess(doc, 600);
  EXPECT_EQ(p.scale_x, 1.0);
  EXPECT_EQ(p.scale_y, 1.0);
  EXPECT_EQ(p.annotations, doc.annotations);
  EXPECT_DOUBLE_EQ(p.image.at(0, 0, 20, 10), 0.0);
  EXPECT_DOUBLE_EQ(p.image.at(0, 1, 20, 10), 0.2);
  EXPECT_DOUBLE_EQ(p.image.at(0, 2, 20, 10), 1.0);
  EXPECT_DOUBLE_EQ(p.image.at(0, 0, 0, 0), 1.0);
}

TEST(PreprocessTest, ScalesBoxesIndependentlyPerAxis) {
  const data::AnnotatedDocument doc{"p", data::DocumentImage(1200, 800), {{{0, 0, 600, 400}, 0}}};
  const PreparedImage p = preprocess(doc, 600);
  EXPECT_EQ(p.image.shape(), (numerics::Shape{1, 3, 600, 600}));
  EXPECT_DOUBLE_EQ(p.scale_x, 0.5);
  EXPECT_DOUBLE_EQ(p.scale_y, 0.75);
  const Box b = p.annotations[0].box;
  EXPECT_DOUBLE_EQ(b.x_min, 0.0);
  EXPECT_DOUBLE_EQ(b.y_min, 0.0);
  EXPECT_DOUBLE_EQ(b.x_max, 300.0);
  EXPECT_DOUBLE_EQ(b.y_max, 300.0);
}

TEST(PreprocessTest, MatchesBilinearOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> u(0, 255);
  const int w = 37, h = 23, size = 16;
  data::DocumentImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.set(x, y, {static_cast<std::uint8_t>(u(rng)), static_cast<std::uint8_t>(u(rng)),
                     static_cast<std::uint8_t>(u(rng))});
  const PreparedImage p = preprocess({"p", img, {}}, size);
  const double sx = static_cast<double>(size) / w, sy = static_cast<double>(size) / h;
  auto channel = [&](int x, int y, int c) {
    const data::Rgb v = img.at(x, y);
    return (c == 0 ? v.r : c == 1 ? v.g : v.b) / 255.0;
  };
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double fx = std::clamp((x + 0.5) / sx - 0.5, 0.0, w - 1.0);
      const double fy = std::clamp((y + 0.5) / sy - 0.5, 0.0, h - 1.0);
      const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
      const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
      const double ax = fx - x0, ay = fy - y0;
      for (int c = 0; c < 3; ++c) {
        const double want = (1 - ax) * (1 - ay) * channel(x0, y0, c) + ax * (1 - ay) * channel(x1, y0, c) +
                            (1 - ax) * ay * channel(x0, y1, c) + ax * ay * channel(x1, y1, c);
        ASSERT_NEAR(p.image.at(0, static_cast<std::size_t>(c), static_cast<std::size_t>(y),
                               static_cast<std::size_t>(x)),
                    want, 1e-12)
            << x << "," << y << "," << c;
      }
    }
}

TEST(PreprocessTest, RejectsBadSize) {
  const data::AnnotatedDocument doc{"p", data::DocumentImage(4, 4), {}};
  EXPECT_THROW(preprocess(doc, 0), ConfigError);
}

// ---------------------------------------------------------------- backbone / rpn

TEST(BackboneTest, BlankPageGivesZeroFeatures) {
  // Ink is 1 - x, so white paper is zero input and biases start at zero.
  const DetectorModel m = create_model(DetectorConfig(), 1);
  const Tensor white({1, 3, 600, 600}, 1.0);
  const Tensor f = backbone_forward(m, white, nullptr);
  EXPECT_EQ(f.shape(), (numerics::Shape{1, 32, 38, 38}));
  EXPECT_EQ(numerics::max_abs(f), 0.0);
}

TEST(RpnTest, OutputShapesFollowK) {
  const DetectorModel m = create_model(DetectorConfig(), 1);
  std::mt19937_64 rng(1);
  const Tensor f = testing::random_tensor({1, 32, 5, 7}, rng);
  const RpnOutput o = rpn_forward(m, f, nullptr);
  EXPECT_EQ(o.scores.shape(), (numerics::Shape{30, 5, 7, 2}));
  EXPECT_EQ(o.deltas.shape(), (numerics::Shape{30, 5, 7, 4}));
  EXPECT_EQ(objectness(o).size(), 30u * 5 * 7);
}

TEST(RpnTest, ConstantFeaturesGiveConstantScores) {
  const DetectorModel m = create_model(DetectorConfig(), 2);
  const Tensor f({1, 32, 6, 6}, 0.3);
  const RpnOutput o = rpn_forward(m, f, nullptr, {true});
  for (std::size_t a = 0; a < 30; ++a)
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t c = 0; c < 2; ++c)
          EXPECT_EQ(o.scores[((a * 6 + i) * 6 + j) * 2 + c], o.scores[(a * 36) * 2 + c]);
}

TEST(RpnTest, CircularShiftEquivariance) {
  DetectorModel m = create_model(DetectorConfig(), 4);
  // Non-trivial score weights so the check is not vacuous.
  std::mt19937_64 rng(9);
  m.rpn_cls.weight.value = testing::random_tensor(m.rpn_cls.weight.value.shape(), rng);
  m.rpn_reg.weight.value = testing::random_tensor(m.rpn_reg.weight.value.shape(), rng);
  const std::size_t h = 5, w = 6;
  const Tensor f = testing::random_tensor({1, 32, h, w}, rng, 0.0, 1.0);
  Tensor shifted(f.shape());
  for (std::size_t c = 0; c < 32; ++c)
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) shifted.at(0, c, (i + 1) % h, (j + 1) % w) = f.at(0, c, i, j);
  const RpnOutput a = rpn_forward(m, f, nullptr, {true});
  const RpnOutput b = rpn_forward(m, shifted, nullptr, {true});
  double worst = 0.0;
  for (std::size_t k = 0; k < 30; ++k)
    for (std::size_t i = 0; i < h; ++i)
      for (std::size_t j = 0; j < w; ++j) {
        const std::size_t src = (k * h + i) * w + j;
        const std::size_t dst = (k * h + (i + 1) % h) * w + (j + 1) % w;
        for (std::size_t c = 0; c < 2; ++c)
          worst = std::max(worst, std::abs(a.scores[src * 2 + c] - b.scores[dst * 2 + c]));
        for (std::size_t c = 0; c < 4; ++c)
          worst = std::max(worst, std::abs(a.deltas[src * 4 + c] - b.deltas[dst * 4 + c]));
      }
  EXPECT_LE(worst, 1e-9);
  EXPECT_GT(numerics::max_abs(a.scores), 1e-3);
}

// ---------------------------------------------------------------- proposals

RpnOutput rpn_from(const std::vector<double>& logit, const std::vector<geometry::BoxDelta>& d) {
  const std::size_t n = logit.size();
  RpnOutput o{Tensor({n, 1, 1, 2}), Tensor({n, 1, 1, 4})};
  for (std::size_t i = 0; i < n; ++i) {
    o.scores[2 * i + 1] = logit[i];
    o.deltas[4 * i] = d[i].dx;
    o.deltas[4 * i + 1] = d[i].dy;
    o.deltas[4 * i + 2] = d[i].dw;
    o.deltas[4 * i + 3] = d[i].dh;
  }
  return o;
}

TEST(ProposeTest, SingleAnchorIsDecodedAndClipped) {
  const std::vector<Box> anchors = {{-10, 5, 30, 45}};
  const RpnOutput o = rpn_from({0.0}, {{0.1, 0.0, 0.0, 0.2}});
  const auto p = propose(o, anchors, {10, 5, 0.7, 1.0}, 100, 100);
  ASSERT_EQ(p.size(), 1u);
  const Box want = geometry::clip_box(geometry::decode_delta(anchors[0], {0.1, 0.0, 0.0, 0.2}), 100, 100);
  EXPECT_EQ(p[0].box, want);
  EXPECT_EQ(p[0].label, 0);
  EXPECT_DOUBLE_EQ(p[0].score, 0.5);
}

// Straightforward re-implementation: score everything, filter, sort the
// full list, truncate, suppress.
std::vector<geometry::ScoredBox> propose_oracle(const std::vector<double>& logit,
                                                const std::vector<geometry::BoxDelta>& d,
                                                const std::vector<Box>& anchors,
                                                const ProposalConfig& cfg, double w, double h) {
  struct C { std::size_t i; Box b; double s; };
  std::vector<C> all;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Box b = geometry::clip_box(geometry::decode_delta(anchors[i], d[i]), w, h);
    if (b.width() < cfg.min_box_size || b.height() < cfg.min_box_size || b.area() <= 0) continue;
    all.push_back({i, b, 1.0 / (1.0 + std::exp(-logit[i]))});
  }
  std::stable_sort(all.begin(), all.end(), [](const C& a, const C& b) { return a.s > b.s; });
  if (all.size() > static_cast<std::size_t>(cfg.pre_nms_top_n)) all.resize(static_cast<std::size_t>(cfg.pre_nms_top_n));
  std::vector<geometry::ScoredBox> out;
  for (const C& c : all) {
    bool keep = true;
    for (const auto& k : out) keep = keep && geometry::iou(k.box, c.b) <= cfg.nms_threshold;
    if (keep) out.push_back({c.b, 0, c.s});
  }
  if (out.size() > static_cast<std::size_t>(cfg.post_nms_top_n)) out.resize(static_cast<std::size_t>(cfg.post_nms_top_n));
  return out;
}

TEST(ProposeTest, MatchesBruteForceOracle) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> n(0.0, 0.3);
  std::uniform_int_distribution<int> coarse(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Box> anchors;
    std::vector<double> logit;
    std::vector<geometry::BoxDelta> d;
    for (int i = 0; i < 20; ++i) {
      anchors.push_back(testing::random_box(rng, 60.0, 2.0, 40.0));
      logit.push_back(coarse(rng) * 0.5);  // coarse values force score ties
      d.push_back({n(rng), n(rng), n(rng), n(rng)});
    }
    const ProposalConfig cfg{12, 6, 0.5, 3.0};
    const auto got = propose(rpn_from(logit, d), anchors, cfg, 64, 64);
    const auto want = propose_oracle(logit, d, anchors, cfg, 64, 64);
    ASSERT_EQ(got.size(), want.size()) << "trial " << trial;
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i].box, want[i].box) << "trial " << trial;
      EXPECT_NEAR(got[i].score, want[i].score, 1e-15);
    }
    EXPECT_LE(got.size(), 6u);
  }
}

// ---------------------------------------------------------------- roi pooling

TEST(RoiPoolTest, QuadrantMaxima) {
  const RoiPoolResult r = roi_pool(ramp_4x4(), {0, 0, 4, 4}, roi_cfg(RoiMode::kPool, 2, 2));
  EXPECT_EQ(r.output.shape(), (numerics::Shape{1, 2, 2}));
  EXPECT_EQ(r.output.values()[0], 6.0);
  EXPECT_EQ(r.output.values()[1], 8.0);
  EXPECT_EQ(r.output.values()[2], 14.0);
  EXPECT_EQ(r.output.values()[3], 16.0);
}

TEST(RoiPoolTest, SingleCellRoi) {
  const RoiPoolResult r = roi_pool(ramp_4x4(), {2, 1, 3, 2}, roi_cfg(RoiMode::kPool, 1, 1));
  EXPECT_EQ(r.output[0], 7.0);
}

TEST(RoiPoolTest, ThinRoiFillsEveryBinFromNearestCell) {
  // One cell wide, pooled to 3x3: every bin must hold a real feature value.
  const RoiPoolResult r = roi_pool(ramp_4x4(), {1.2, 0.1, 1.6, 0.6}, roi_cfg(RoiMode::kPool, 3, 3));
  for (double v : r.output.values()) EXPECT_EQ(v, 2.0);
}

TEST(RoiPoolTest, BinsPastTheEdgeTakeNearestCell) {
  // Snaps to columns [4, 6), both outside the 4-wide map.
  const RoiPoolResult r = roi_pool(ramp_4x4(), {3.6, 0, 6, 2}, roi_cfg(RoiMode::kPool, 2, 2));
  EXPECT_EQ(r.output.values()[0], 4.0);
  EXPECT_EQ(r.output.values()[1], 4.0);
  EXPECT_EQ(r.output.values()[2], 8.0);
  EXPECT_EQ(r.output.values()[3], 8.0);
}

TEST(RoiPoolTest, FixedShapeAndArgmaxBackward) {
  std::mt19937_64 rng(3);
  const Tensor f = testing::random_tensor({2, 9, 11}, rng);
  for (int t = 0; t < 200; ++t) {
    const Box b = testing::random_box(rng, 10.0, 0.1, 8.0);
    const RoiPoolResult r = roi_pool(f, b, roi_cfg(RoiMode::kPool, 3, 4));
    ASSERT_EQ(r.output.shape(), (numerics::Shape{2, 3, 4}));
    for (std::size_t i = 0; i < r.output.size(); ++i) ASSERT_EQ(r.output[i], f[r.argmax[i]]);
    const Tensor go({2, 3, 4}, 1.0);
    Tensor g(f.shape());
    roi_pool_backward(go, r.argmax, g);
    double sum = 0.0;
    for (double v : g.values()) sum += v;
    EXPECT_DOUBLE_EQ(sum, 24.0);
  }
}

TEST(RoiAlignTest, ConstantMapGivesConstantOutput) {
  const Tensor f({2, 5, 5}, 3.25);
  const Tensor out = roi_align(f, {1, 1, 3, 3}, roi_cfg(RoiMode::kAlign, 2, 2, 1));
  for (double v : out.values()) EXPECT_DOUBLE_EQ(v, 3.25);
}

TEST(RoiAlignTest, LinearRampGivesBinCentres) {
  // f(i, j) = j. Cell j is centred at x = j + 0.5, so a sample at x reads
  // x - 0.5 and a bin averages to its centre minus 0.5.
  Tensor f({1, 6, 8});
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 8; ++j) f.at(0, i, j) = static_cast<double>(j);
  const Box roi{1.3, 1.0, 5.7, 4.0};
  const Tensor out = roi_align(f, roi, roi_cfg(RoiMode::kAlign, 3, 4, 2));
  const double bw = roi.width() / 4;
  for (std::size_t y = 0; y < 3; ++y)
    for (std::size_t x = 0; x < 4; ++x)
      EXPECT_NEAR(out.at(0, y, x), roi.x_min + bw * (static_cast<double>(x) + 0.5) - 0.5, 1e-12);
}

TEST(RoiAlignTest, SubCellShiftChangesAlignButNotPool) {
  Tensor f({1, 6, 8});
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 8; ++j) f.at(0, i, j) = static_cast<double>(j);
  const Box a{1.0, 1.0, 5.0, 4.0};
  const Box b = geometry::translate_box(a, 0.4, 0.0);  // rounds to the same cells
  EXPECT_EQ(roi_pool(f, a, roi_cfg(RoiMode::kPool, 2, 2)).output,
            roi_pool(f, b, roi_cfg(RoiMode::kPool, 2, 2)).output);
  const Tensor oa = roi_align(f, a, roi_cfg(RoiMode::kAlign, 2, 2));
  const Tensor ob = roi_align(f, b, roi_cfg(RoiMode::kAlign, 2, 2));
  for (std::size_t i = 0; i < oa.size(); ++i) EXPECT_NEAR(ob[i] - oa[i], 0.4, 1e-12);
}

TEST(RoiAlignTest, FixedShapeForAnyRoi) {
  std::mt19937_64 rng(8);
  const Tensor f = testing::random_tensor({3, 7, 7}, rng);
  for (int t = 0; t < 100; ++t) {
    const Box b = testing::random_box(rng, 8.0, 0.05, 12.0);
    EXPECT_EQ(roi_align(f, b, roi_cfg(RoiMode::kAlign, 7, 7)).shape(), (numerics::Shape{3, 7, 7}));
  }
  EXPECT_THROW(roi_align(f, {2, 2, 2, 5}, roi_cfg(RoiMode::kAlign, 2, 2)), ShapeError);
}

TEST(RoiFeaturesTest, BatchedMatchesSingleInFeatureCoordinates) {
  std::mt19937_64 rng(4);
  const Tensor f = testing::random_tensor({1, 2, 6, 6}, rng);
  const Tensor chw = f.reshaped({2, 6, 6});
  const std::vector<Box> rois = {{16, 16, 64, 80}, {0, 8, 40, 40}};
  for (RoiMode mode : {RoiMode::kAlign, RoiMode::kPool}) {
    const RoiConfig cfg = roi_cfg(mode, 2, 3);
    const RoiBatch batch = roi_features(f, rois, 16.0, cfg);
    ASSERT_EQ(batch.output.shape(), (numerics::Shape{2, 2, 2, 3}));
    for (std::size_t r = 0; r < rois.size(); ++r) {
      const Box fb = geometry::scale_box(rois[r], 1.0 / 16, 1.0 / 16);
      const Tensor one = mode == RoiMode::kAlign ? roi_align(chw, fb, cfg) : roi_pool(chw, fb, cfg).output;
      for (std::size_t i = 0; i < one.size(); ++i) EXPECT_EQ(batch.output[r * 12 + i], one[i]);
    }
  }
}

// ---------------------------------------------------------------- head

TEST(HeadTest, ZeroWeightsGiveUniformScores) {
  DetectorModel m = create_model(DetectorConfig(), 1);
  m.head_cls.weight.value.fill(0.0);
  m.head_cls.bias.value.fill(0.0);
  std::mt19937_64 rng(2);
  const Tensor roi = testing::random_tensor({3, 32, 7, 7}, rng);
  const HeadOutput o = head_forward(m, roi, nullptr);
  EXPECT_EQ(o.class_logits.shape(), (numerics::Shape{3, 4}));
  EXPECT_EQ(o.deltas.shape(), (numerics::Shape{3, 12}));
  const auto p = numerics::softmax(std::span<const double>(o.class_logits.data(), 4));
  for (double v : p) EXPECT_DOUBLE_EQ(v, 0.25);
}

TEST(HeadTest, RejectsWrongInputSize) {
  const DetectorModel m = create_model(DetectorConfig(), 1);
  EXPECT_THROW(head_forward(m, Tensor({2, 32, 5, 5}), nullptr), ShapeError);
}

// ---------------------------------------------------------------- targets

TEST(AnchorLabelTest, ThresholdsAndArgmaxRule) {
  const std::vector<Box> gts = {{0, 0, 10, 10}, {100, 100, 110, 110}};
  const std::vector<Box> anchors = {
      {0, 0, 10, 8},          // IoU 0.8 with gt 0 -> positive
      {50, 50, 60, 60},       // IoU 0 -> negative
      {0, 0, 10, 5},          // IoU 0.5 -> ignore
      {100, 104, 110, 114},   // IoU 0.4286, best for gt 1 -> positive
      {100, 106, 110, 116},   // IoU 0.25 -> negative
      {0, 9, 10, 19},         // IoU 0.0526 -> negative
  };
  const AnchorAssignment a = assign_anchor_labels(anchors, gts, MatchConfig());
  EXPECT_EQ(a.labels, (std::vector<std::int8_t>{kPositive, kNegative, kIgnore, kPositive, kNegative, kNegative}));
  EXPECT_EQ(a.matched_gt[0], 0);
  EXPECT_EQ(a.matched_gt[3], 1);
}

TEST(AnchorLabelTest, NoGtMeansAllNegative) {
  const std::vector<Box> anchors = {{0, 0, 4, 4}, {1, 1, 5, 5}};
  const AnchorAssignment a = assign_anchor_labels(anchors, {}, MatchConfig());
  EXPECT_EQ(a.labels, (std::vector<std::int8_t>{kNegative, kNegative}));
}

TEST(AnchorLabelTest, SubsamplingCapsBatchAndPositives) {
  std::mt19937_64 rng(1);
  AnchorAssignment a;
  a.labels.assign(1000, kNegative);
  for (std::size_t i = 0; i < 300; ++i) a.labels[i * 3] = kPositive;
  a.matched_gt.assign(1000, 0);
  MatchConfig cfg;
  subsample_anchor_labels(a, cfg, rng);
  EXPECT_EQ(std::count(a.labels.begin(), a.labels.end(), kPositive), 128);
  EXPECT_EQ(std::count(a.labels.begin(), a.labels.end(), kNegative), 128);
}

TEST(SampleRoisTest, GtBoxesAreForegroundWithZeroTargets) {
  std::mt19937_64 rng(1);
  const std::vector<data::Annotation> gts = {{{10, 10, 50, 40}, 2}, {{5, 5, 5, 30}, 0}};
  const std::vector<Box> props = {{200, 200, 250, 260}, {12, 10, 50, 42}};
  const auto rois = sample_rois(props, gts, MatchConfig(), {10, 10, 5, 5}, rng);
  int fg = 0;
  for (const RoiSample& r : rois) {
    if (r.label == 0) continue;
    ++fg;
    EXPECT_EQ(r.label, 3);  // equation, shifted past background
    if (r.box == gts[0].box) {
      EXPECT_EQ(r.target, geometry::BoxDelta{});
    }
  }
  EXPECT_EQ(fg, 2);  // the GT itself and the near-duplicate; the degenerate GT is skipped
  EXPECT_EQ(rois.size(), 3u);
}

TEST(SampleRoisTest, ForegroundFractionCapped) {
  std::mt19937_64 rng(2);
  const std::vector<data::Annotation> gts = {{{0, 0, 100, 100}, 0}};
  std::vector<Box> props;
  for (int i = 0; i < 100; ++i) props.push_back({i * 0.1, 0, 100, 100});
  for (int i = 0; i < 100; ++i) props.push_back({200, 200, 220.0 + i, 260});
  const auto rois = sample_rois(props, gts, MatchConfig(), {10, 10, 5, 5}, rng);
  EXPECT_EQ(rois.size(), 64u);
  EXPECT_EQ(std::count_if(rois.begin(), rois.end(), [](const RoiSample& r) { return r.label > 0; }), 16);
}

// ---------------------------------------------------------------- losses

TEST(LossTest, ToyPlanHasEveryTerm) {
  DetectorModel m = create_model(DetectorConfig::toy(), 3);
  std::mt19937_64 rng(3);
  const Tensor img = testing::random_tensor({1, 3, 8, 8}, rng, 0.0, 1.0);
  const std::vector<data::Annotation> gts = {{{1, 1, 6, 5}, 0}, {{4.5, 3.5, 8, 8}, 2}};
  const ForwardState s = forward_features(m, img);
  const TrainingPlan plan = build_plan(m, s, gts, rng);
  EXPECT_GT(std::count(plan.anchor_labels.begin(), plan.anchor_labels.end(), kPositive), 0);
  EXPECT_GT(std::count_if(plan.rois.begin(), plan.rois.end(), [](const RoiSample& r) { return r.label > 0; }), 0);
  const LossBreakdown l = loss_and_backward(m, s, plan, false);
  EXPECT_GT(l.rpn_cls, 0.0);
  EXPECT_GT(l.head_cls, 0.0);
  EXPECT_GT(l.head_reg, 0.0);
  EXPECT_NEAR(l.total(), l.rpn_cls + l.rpn_reg + l.head_cls + l.head_reg, 1e-15);
  // Untrained binary classifier over sampled anchors: close to log 2.
  EXPECT_NEAR(l.rpn_cls, std::log(2.0), 0.05);
}

TEST(LossTest, GradScaleIsLinear) {
  std::mt19937_64 rng(5);
  DetectorModel a = create_model(DetectorConfig::toy(), 5);
  DetectorModel b = a;
  const Tensor img = testing::random_tensor({1, 3, 8, 8}, rng, 0.0, 1.0);
  const std::vector<data::Annotation> gts = {{{0, 0, 5, 6}, 1}};
  const ForwardState s = forward_features(a, img);
  const TrainingPlan plan = build_plan(a, s, gts, rng);
  loss_and_backward(a, s, plan, true, 1.0);
  loss_and_backward(b, s, plan, true, 0.25);
  const auto pa = a.parameters();
  const auto pb = b.parameters();
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pa[i]->grad.size(); ++j)
      ASSERT_NEAR(pb[i]->grad[j], 0.25 * pa[i]->grad[j], 1e-15);
}

TEST(GradcheckTest, EverySuiteWithinTolerance) {
  for (const gradcheck::SuiteResult& r : gradcheck::run_all(7)) {
    EXPECT_LE(r.max_relative_error, gradcheck::kTolerance) << r.name << " worst " << r.worst;
  }
  EXPECT_EQ(gradcheck::suite_names().size(), 9u);
  EXPECT_THROW(gradcheck::run_suite("nope", 1), ConfigError);
}

TEST(GradcheckTest, EndToEndAcrossSeeds) {
  for (std::uint64_t seed = 100; seed < 140; ++seed) {
    for (const char* name : {"end_to_end_align", "end_to_end_pool"}) {
      const gradcheck::SuiteResult r = gradcheck::run_suite(name, seed);
      EXPECT_LE(r.max_relative_error, gradcheck::kTolerance) << name << " seed " << seed << " " << r.worst;
    }
  }
}

// ---------------------------------------------------------------- serialize

TEST(SerializeTest, ConfigJsonRoundTrip) {
  DetectorConfig c = DetectorConfig::toy();
  c.roi.mode = RoiMode::kPool;
  c.labels = geometry::LabelSet({"table"});
  EXPECT_EQ(config_from_json(config_to_json(c), "x"), c);
  EXPECT_EQ(config_from_json(config_to_json(DetectorConfig()), "x"), DetectorConfig());
  DetectorConfig small;
  small.backbone = BackboneConfig::from_preset("small");
  EXPECT_EQ(config_from_json(config_to_json(small), "x"), small);
}

TEST(SerializeTest, ConfigJsonErrorsNameOrigin) {
  try {
    config_from_json("{\"schema\": \"docdet.model\"}", "m.ckpt");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("m.ckpt"), std::string::npos);
  }
}

TEST(SerializeTest, ModelRoundTrip) {
  testing::TempDir dir("serialize");
  const DetectorModel m = create_model(DetectorConfig(), 12);
  save_model(dir / "m.ckpt", m);
  const DetectorModel back = load_model(dir / "m.ckpt");
  EXPECT_EQ(back.config, m.config);
  EXPECT_EQ(parameter_checksum(back), parameter_checksum(m));
}

TEST(SerializeTest, CorruptCheckpointReportsOffset) {
  testing::TempDir dir("corrupt");
  save_model(dir / "m.ckpt", create_model(DetectorConfig::toy(), 1));
  const auto size = std::filesystem::file_size(dir / "m.ckpt");
  std::filesystem::resize_file(dir / "m.ckpt", size - 7);
  try {
    load_model(dir / "m.ckpt");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos) << e.what();
  }
}

TEST(SerializeTest, ShapeMismatchIsNamed) {
  testing::TempDir dir("mismatch");
  DetectorModel m = create_model(DetectorConfig::toy(), 1);
  numerics::CheckpointContents c;
  c.metadata = config_to_json(m.config);
  for (const numerics::Parameter* p : m.parameters()) c.entries.push_back({p->name, p->value});
  c.entries[2].value = Tensor({1});
  numerics::save_checkpoint(dir / "bad.ckpt", c);
  try {
    load_model(dir / "bad.ckpt");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find(c.entries[2].name), std::string::npos) << e.what();
  }
}

// ---------------------------------------------------------------- fine-tune

TEST(FineTuneTest, DifferentLabelsReinitOnlyClassLayers) {
  const DetectorModel base = create_model(DetectorConfig(), 2);
  const DetectorModel ft = prepare_fine_tune(base, geometry::LabelSet({"table"}), 9);
  EXPECT_EQ(ft.head_cls.weight.value.dim(0), 2u);
  EXPECT_EQ(ft.head_reg.weight.value.dim(0), 4u);
  const auto pa = base.parameters();
  const auto pb = ft.parameters();
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const bool class_layer = pa[i]->name.starts_with("head.cls") || pa[i]->name.starts_with("head.reg");
    if (!class_layer) {
      EXPECT_EQ(pa[i]->value, pb[i]->value) << pa[i]->name;
    }
  }
}

TEST(FineTuneTest, SameLabelsKeepEverything) {
  const DetectorModel base = create_model(DetectorConfig(), 2);
  const DetectorModel ft = prepare_fine_tune(base, base.config.labels, 9);
  EXPECT_EQ(parameter_checksum(ft), parameter_checksum(base));
}

// ---------------------------------------------------------------- detect

TEST(DetectTest, ThresholdOneGivesNothing) {
  const DetectorModel m = create_model(DetectorConfig(), 1);
  const data::AnnotatedDocument doc = data::synth_page(data::SynthConfig(), 3);
  DetectOptions o;
  o.score_threshold = 1.0;
  EXPECT_TRUE(detect(m, doc.image, o).empty());
}

TEST(DetectTest, BoxesInsideImageAndDeterministic) {
  DetectorModel m = create_model(DetectorConfig(), 1);
  // Give the untrained head some spread so boxes are emitted.
  std::mt19937_64 rng(1);
  m.head_reg.weight.value = testing::random_tensor(m.head_reg.weight.value.shape(), rng, -0.5, 0.5);
  data::DocumentImage img = data::synth_page(data::SynthConfig(), 4).image;
  DetectOptions o;
  o.score_threshold = 0.0;
  const auto a = detect(m, img, o);
  const auto b = detect(m, img, o);
  EXPECT_EQ(a, b);
  ASSERT_FALSE(a.empty());
  EXPECT_LE(a.size(), 100u);
  for (const auto& d : a) {
    EXPECT_GE(d.box.x_min, 0.0);
    EXPECT_GE(d.box.y_min, 0.0);
    EXPECT_LE(d.box.x_max, img.width());
    EXPECT_LE(d.box.y_max, img.height());
    EXPECT_GE(d.label, 0);
    EXPECT_LT(d.label, 3);
  }
  for (std::size_t i = 1; i < a.size(); ++i) EXPECT_GE(a[i - 1].score, a[i].score);
}

TEST(DetectTest, RejectsBadOptions) {
  const DetectorModel m = create_model(DetectorConfig::toy(), 1);
  DetectOptions o;
  o.nms_threshold = 1.5;
  EXPECT_THROW(detect(m, data::DocumentImage(8, 8), o), ConfigError);
}

}  // namespace
}  // namespace docdet::detector

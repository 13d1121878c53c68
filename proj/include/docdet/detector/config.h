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

#ifndef DOCDET_DETECTOR_CONFIG_H_
#define DOCDET_DETECTOR_CONFIG_H_

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "docdet/geometry/anchors.h"
#include "docdet/geometry/box.h"

namespace docdet::detector {

struct LayerSpec {
  enum class Kind { kConv, kMaxPool };
  Kind kind = Kind::kConv;
  int out_channels = 0;  // conv only
  int kernel = 3;
  int stride = 1;
  int padding = 0;       // conv only
  bool relu = true;      // conv only

  bool operator==(const LayerSpec&) const = default;
};

struct BackboneConfig {
  std::string preset;
  std::vector<LayerSpec> layers;
  int in_channels = 3;

  int total_stride() const;
  int out_channels() const;
  std::size_t conv_count() const;
  // Feature map size for an input of the given size; throws ConfigError
  // when a layer does not fit.
  std::pair<int, int> feature_size(int height, int width) const;
  void validate() const;

  // "tiny" (4 convs), "small" (8 convs, 3 pools), "toy" (2 convs, stride 4).
  static BackboneConfig from_preset(std::string_view name);

  bool operator==(const BackboneConfig&) const = default;
};

struct ProposalConfig {
  int pre_nms_top_n = 2000;
  int post_nms_top_n = 300;
  double nms_threshold = 0.7;
  double min_box_size = 4.0;  // input pixels

  void validate() const;
  bool operator==(const ProposalConfig&) const = default;
};

struct MatchConfig {
  double positive_iou = 0.7;
  double negative_iou = 0.3;
  int rpn_batch = 256;
  double positive_fraction = 0.5;
  double head_positive_iou = 0.5;
  int head_batch = 64;
  double head_positive_fraction = 0.25;

  void validate() const;
  bool operator==(const MatchConfig&) const = default;
};

enum class RoiMode { kPool, kAlign };

std::string_view roi_mode_name(RoiMode m);
RoiMode parse_roi_mode(std::string_view s);  // throws ConfigError

struct RoiConfig {
  RoiMode mode = RoiMode::kAlign;
  int output_h = 7;
  int output_w = 7;
  int samples_per_bin = 2;

  void validate() const;
  bool operator==(const RoiConfig&) const = default;
};

struct DetectorConfig {
  BackboneConfig backbone = BackboneConfig::from_preset("tiny");
  geometry::AnchorConfig anchors = geometry::AnchorConfig::document_default();
  int rpn_channels = 32;
  int head_hidden = 128;
  RoiConfig roi;
  ProposalConfig proposals;
  MatchConfig match;
  geometry::LabelSet labels = geometry::LabelSet::document_objects();
  int input_size = 600;
  // Head regression targets are scaled by these before the loss.
  std::array<double, 4> head_delta_weights{10.0, 10.0, 5.0, 5.0};

  void validate() const;
  bool operator==(const DetectorConfig&) const = default;

  // Two convs at stride 4 with four small anchors, for gradient checks on
  // 8x8 inputs.
  static DetectorConfig toy();
};

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_CONFIG_H_

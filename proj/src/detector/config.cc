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

#include "docdet/detector/config.h"

#include "docdet/error.h"
#include "docdet/numerics/ops.h"

namespace docdet::detector {
namespace {

LayerSpec conv(int out, int kernel, int stride, int padding) {
  return {LayerSpec::Kind::kConv, out, kernel, stride, padding, true};
}
LayerSpec pool(int window) { return {LayerSpec::Kind::kMaxPool, 0, window, window, 0, false}; }

}  // namespace

int BackboneConfig::total_stride() const {
  int s = 1;
  for (const auto& l : layers) s *= l.stride;
  return s;
}

int BackboneConfig::out_channels() const {
  int c = in_channels;
  for (const auto& l : layers) {
    if (l.kind == LayerSpec::Kind::kConv) c = l.out_channels;
  }
  return c;
}

std::size_t BackboneConfig::conv_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.kind == LayerSpec::Kind::kConv;
  return n;
}

std::pair<int, int> BackboneConfig::feature_size(int height, int width) const {
  long h = height, w = width;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const int pad = l.kind == LayerSpec::Kind::kConv ? l.padding : 0;
    if (h + 2 * pad < l.kernel || w + 2 * pad < l.kernel) {
      throw ConfigError("backbone layer " + std::to_string(i) + " does not fit a " +
                        std::to_string(h) + "x" + std::to_string(w) + " input");
    }
    h = static_cast<long>(numerics::conv_output_size(static_cast<std::size_t>(h),
                                                     static_cast<std::size_t>(l.kernel),
                                                     l.stride, pad));
    w = static_cast<long>(numerics::conv_output_size(static_cast<std::size_t>(w),
                                                     static_cast<std::size_t>(l.kernel),
                                                     l.stride, pad));
  }
  return {static_cast<int>(h), static_cast<int>(w)};
}

void BackboneConfig::validate() const {
  if (layers.empty()) throw ConfigError("backbone needs at least one layer");
  if (in_channels < 1) throw ConfigError("backbone input channels must be >= 1");
  if (layers.back().kind != LayerSpec::Kind::kConv) {
    throw ConfigError("backbone must end in a conv layer, not a pool");
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string where = "backbone layer " + std::to_string(i);
    if (l.kernel < 1 || l.stride < 1) throw ConfigError(where + ": kernel and stride must be >= 1");
    if (l.kind == LayerSpec::Kind::kConv) {
      if (l.out_channels < 1) throw ConfigError(where + ": out_channels must be >= 1");
      if (l.padding < 0) throw ConfigError(where + ": padding must be >= 0");
    }
  }
}

BackboneConfig BackboneConfig::from_preset(std::string_view name) {
  BackboneConfig b;
  b.preset = std::string(name);
  if (name == "tiny") {
    b.layers = {conv(16, 4, 4, 0), conv(32, 3, 2, 1), conv(32, 3, 2, 1), conv(32, 3, 1, 1)};
  } else if (name == "small") {
    b.layers = {conv(16, 3, 2, 1), conv(16, 3, 1, 1), pool(2), conv(32, 3, 1, 1),
                conv(32, 3, 1, 1), pool(2), conv(48, 3, 1, 1), conv(48, 3, 1, 1),
                pool(2), conv(48, 3, 1, 1), conv(48, 3, 1, 1)};
  } else if (name == "toy") {
    b.layers = {conv(3, 3, 2, 1), conv(4, 3, 2, 1)};
  } else {
    throw ConfigError("unknown backbone preset '" + std::string(name) +
                      "' (known: tiny, small, toy)");
  }
  return b;
}

void ProposalConfig::validate() const {
  if (pre_nms_top_n < 1 || post_nms_top_n < 1) throw ConfigError("proposal counts must be >= 1");
  if (post_nms_top_n > pre_nms_top_n) throw ConfigError("post_nms_top_n must be <= pre_nms_top_n");
  if (!(nms_threshold >= 0.0 && nms_threshold <= 1.0)) {
    throw ConfigError("proposal NMS threshold must lie in [0, 1]");
  }
  if (!(min_box_size >= 0.0)) throw ConfigError("min_box_size must be >= 0");
}

void MatchConfig::validate() const {
  if (!(negative_iou >= 0.0 && negative_iou <= positive_iou && positive_iou <= 1.0)) {
    throw ConfigError("need 0 <= negative_iou <= positive_iou <= 1");
  }
  if (rpn_batch < 1 || head_batch < 1) throw ConfigError("sample batch sizes must be >= 1");
  for (double f : {positive_fraction, head_positive_fraction}) {
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError("positive fractions must lie in (0, 1]");
  }
  if (!(head_positive_iou > 0.0 && head_positive_iou <= 1.0)) {
    throw ConfigError("head_positive_iou must lie in (0, 1]");
  }
}

std::string_view roi_mode_name(RoiMode m) { return m == RoiMode::kPool ? "pool" : "align"; }

RoiMode parse_roi_mode(std::string_view s) {
  if (s == "pool") return RoiMode::kPool;
  if (s == "align") return RoiMode::kAlign;
  throw ConfigError("RoI mode must be 'pool' or 'align', got '" + std::string(s) + "'");
}

void RoiConfig::validate() const {
  if (output_h < 1 || output_w < 1) throw ConfigError("RoI output size must be >= 1");
  if (samples_per_bin < 1) throw ConfigError("samples_per_bin must be >= 1");
}

void DetectorConfig::validate() const {
  backbone.validate();
  anchors.validate();
  if (anchors.stride != backbone.total_stride()) {
    throw ConfigError("anchor stride " + std::to_string(anchors.stride) +
                      " != backbone total stride " + std::to_string(backbone.total_stride()));
  }
  if (rpn_channels < 1 || head_hidden < 1) throw ConfigError("rpn_channels and head_hidden must be >= 1");
  roi.validate();
  proposals.validate();
  match.validate();
  if (labels.empty()) throw ConfigError("detector needs at least one class");
  if (input_size < 1) throw ConfigError("input_size must be >= 1");
  backbone.feature_size(input_size, input_size);
  for (double w : head_delta_weights) {
    if (!(w > 0.0)) throw ConfigError("head delta weights must be > 0");
  }
}

DetectorConfig DetectorConfig::toy() {
  DetectorConfig c;
  c.backbone = BackboneConfig::from_preset("toy");
  c.anchors = {{4.0, 8.0}, {1.0, 0.5}, 4};
  c.rpn_channels = 3;
  c.head_hidden = 5;
  c.roi.output_h = 2;
  c.roi.output_w = 2;
  c.proposals = {50, 10, 0.7, 0.5};
  c.match.rpn_batch = 16;
  c.match.head_batch = 8;
  c.input_size = 8;
  return c;
}

}  // namespace docdet::detector

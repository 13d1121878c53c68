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

#include "docdet/geometry/anchors.h"

#include <cmath>

#include "docdet/error.h"

namespace docdet::geometry {

void AnchorConfig::validate() const {
  if (scales.empty()) throw ConfigError("anchor config: no scales");
  if (ratios.empty()) throw ConfigError("anchor config: no ratios");
  if (stride <= 0) throw ConfigError("anchor config: stride must be positive");
  for (double s : scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw ConfigError("anchor config: scales must be positive");
    }
  }
  for (double r : ratios) {
    if (!(r > 0.0) || !std::isfinite(r)) {
      throw ConfigError("anchor config: ratios must be positive");
    }
  }
}

AnchorConfig AnchorConfig::document_default() {
  return {{8.0, 16.0, 32.0, 64.0, 128.0, 256.0},
          {1.0, 1.0 / 2.0, 1.0 / 3.0, 1.0 / 4.0, 1.0 / 5.0},
          16};
}

std::vector<Box> generate_anchors(const AnchorConfig& cfg, int feature_h,
                                  int feature_w) {
  cfg.validate();
  if (feature_h < 1 || feature_w < 1) {
    throw ConfigError("generate_anchors: feature dims must be >= 1");
  }
  const auto h = static_cast<std::size_t>(feature_h);
  const auto w = static_cast<std::size_t>(feature_w);
  const double stride = cfg.stride;
  std::vector<Box> anchors;
  anchors.reserve(cfg.per_location() * h * w);
  for (double scale : cfg.scales) {
    for (double ratio : cfg.ratios) {
      const double half_w = 0.5 * scale / std::sqrt(ratio);
      const double half_h = 0.5 * scale * std::sqrt(ratio);
      for (std::size_t i = 0; i < h; ++i) {
        const double cy = (static_cast<double>(i) + 0.5) * stride;
        for (std::size_t j = 0; j < w; ++j) {
          const double cx = (static_cast<double>(j) + 0.5) * stride;
          anchors.push_back({cx - half_w, cy - half_h, cx + half_w, cy + half_h});
        }
      }
    }
  }
  return anchors;
}

}  // namespace docdet::geometry

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

#ifndef DOCDET_GEOMETRY_ANCHORS_H_
#define DOCDET_GEOMETRY_ANCHORS_H_

#include <cstddef>
#include <vector>

#include "docdet/geometry/box.h"

namespace docdet::geometry {

// Anchor shapes tiled over a feature grid.
//
// A (scale s, ratio r) anchor has width s / sqrt(r) and height s * sqrt(r),
// so ratios are height/width.
struct AnchorConfig {
  std::vector<double> scales;
  std::vector<double> ratios;
  int stride = 16;

  std::size_t per_location() const { return scales.size() * ratios.size(); }
  void validate() const;  // throws ConfigError

  // Six scales 8..256 and five aspect ratios (1:1 through 5:1 wide),
  // 30 anchors per location.
  static AnchorConfig document_default();

  bool operator==(const AnchorConfig&) const = default;
};

// Anchors for a feature_h x feature_w grid. Index layout is anchor-major:
// index = (a * feature_h + i) * feature_w + j, where a = scale_index *
// ratios.size() + ratio_index. The anchor at cell (i, j) is centred at
// ((j + 0.5) * stride, (i + 0.5) * stride).
std::vector<Box> generate_anchors(const AnchorConfig& cfg, int feature_h,
                                  int feature_w);

inline std::size_t anchor_index(std::size_t a, std::size_t i, std::size_t j,
                                std::size_t feature_h, std::size_t feature_w) {
  return (a * feature_h + i) * feature_w + j;
}

}  // namespace docdet::geometry

#endif  // DOCDET_GEOMETRY_ANCHORS_H_

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

#include "docdet/geometry/delta.h"

#include <algorithm>
#include <cmath>

#include "docdet/error.h"

namespace docdet::geometry {

BoxDelta encode_delta(const Box& anchor, const Box& target) {
  if (!(anchor.width() > 0.0) || !(anchor.height() > 0.0)) {
    throw ConfigError("encode_delta: anchor has zero size");
  }
  if (!(target.width() > 0.0) || !(target.height() > 0.0)) {
    throw ConfigError("encode_delta: target has zero size");
  }
  return {(target.center_x() - anchor.center_x()) / anchor.width(),
          (target.center_y() - anchor.center_y()) / anchor.height(),
          std::log(target.width() / anchor.width()),
          std::log(target.height() / anchor.height())};
}

Box decode_delta(const Box& anchor, const BoxDelta& delta,
                 double log_size_clamp) {
  if (!(anchor.width() > 0.0) || !(anchor.height() > 0.0)) {
    throw ConfigError("decode_delta: anchor has zero size");
  }
  const double cx = anchor.center_x() + delta.dx * anchor.width();
  const double cy = anchor.center_y() + delta.dy * anchor.height();
  const double w = anchor.width() * std::exp(std::min(delta.dw, log_size_clamp));
  const double h = anchor.height() * std::exp(std::min(delta.dh, log_size_clamp));
  return {cx - 0.5 * w, cy - 0.5 * h, cx + 0.5 * w, cy + 0.5 * h};
}

}  // namespace docdet::geometry

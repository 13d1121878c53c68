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

#ifndef DOCDET_GEOMETRY_DELTA_H_
#define DOCDET_GEOMETRY_DELTA_H_

#include <cmath>

#include "docdet/geometry/box.h"

namespace docdet::geometry {

// Regression target relative to a reference box: centre offsets normalised by
// the reference size, and log size ratios.
struct BoxDelta {
  double dx = 0.0;
  double dy = 0.0;
  double dw = 0.0;
  double dh = 0.0;

  bool operator==(const BoxDelta&) const = default;
};

// Upper bound applied to dw/dh before exponentiation in decode_delta.
inline const double kDefaultDeltaClamp = std::log(1000.0 / 16.0);

// Both boxes need positive width and height; throws ConfigError otherwise.
BoxDelta encode_delta(const Box& anchor, const Box& target);

Box decode_delta(const Box& anchor, const BoxDelta& delta,
                 double log_size_clamp = kDefaultDeltaClamp);

}  // namespace docdet::geometry

#endif  // DOCDET_GEOMETRY_DELTA_H_

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

#include "docdet/detector/preprocess.h"

#include <algorithm>
#include <cmath>

#include "docdet/error.h"

namespace docdet::detector {
namespace {

struct Tap {
  int i0, i1;
  double w1;  // weight of i1; i0 gets 1 - w1
};

std::vector<Tap> taps(int out, int in) {
  std::vector<Tap> t(static_cast<std::size_t>(out));
  const double scale = static_cast<double>(in) / out;
  for (int o = 0; o < out; ++o) {
    const double src = std::clamp((o + 0.5) * scale - 0.5, 0.0, static_cast<double>(in - 1));
    const int i0 = static_cast<int>(std::floor(src));
    const int i1 = std::min(i0 + 1, in - 1);
    t[static_cast<std::size_t>(o)] = {i0, i1, src - i0};
  }
  return t;
}

}  // namespace

PreparedImage preprocess(const data::AnnotatedDocument& doc, int size) {
  const data::DocumentImage& img = doc.image;
  if (img.empty()) throw DataError("cannot preprocess empty image '" + doc.id + "'");
  if (size < 1) throw ConfigError("input size must be >= 1");
  PreparedImage out;
  out.original_width = img.width();
  out.original_height = img.height();
  out.scale_x = static_cast<double>(size) / img.width();
  out.scale_y = static_cast<double>(size) / img.height();
  const auto s = static_cast<std::size_t>(size);
  out.image = numerics::Tensor({1, 3, s, s});
  const auto tx = taps(size, img.width());
  const auto ty = taps(size, img.height());
  const std::uint8_t* px = img.pixels().data();
  const auto w = static_cast<std::size_t>(img.width());
  double* dst = out.image.data();
  for (std::size_t y = 0; y < s; ++y) {
    const Tap& a = ty[y];
    const std::uint8_t* r0 = px + static_cast<std::size_t>(a.i0) * w * 3;
    const std::uint8_t* r1 = px + static_cast<std::size_t>(a.i1) * w * 3;
    for (std::size_t x = 0; x < s; ++x) {
      const Tap& b = tx[x];
      const std::size_t c0 = static_cast<std::size_t>(b.i0) * 3, c1 = static_cast<std::size_t>(b.i1) * 3;
      for (std::size_t c = 0; c < 3; ++c) {
        const double top = (1.0 - b.w1) * r0[c0 + c] + b.w1 * r0[c1 + c];
        const double bot = (1.0 - b.w1) * r1[c0 + c] + b.w1 * r1[c1 + c];
        dst[(c * s + y) * s + x] = ((1.0 - a.w1) * top + a.w1 * bot) / 255.0;
      }
    }
  }
  for (const auto& a : doc.annotations) {
    out.annotations.push_back({geometry::scale_box(a.box, out.scale_x, out.scale_y), a.label});
  }
  return out;
}

}  // namespace docdet::detector

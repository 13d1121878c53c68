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

#include "docdet/data/render.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

namespace docdet::data {
namespace {

// 3x5 bitmaps, one row per entry, MSB = leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 11> kFont{{
    {7, 5, 5, 5, 7},  // 0
    {2, 6, 2, 2, 7},  // 1
    {7, 1, 7, 4, 7},  // 2
    {7, 1, 7, 1, 7},  // 3
    {5, 5, 7, 1, 1},  // 4
    {7, 4, 7, 1, 7},  // 5
    {7, 4, 7, 5, 7},  // 6
    {7, 1, 1, 1, 1},  // 7
    {7, 5, 7, 5, 7},  // 8
    {7, 5, 7, 1, 7},  // 9
    {0, 0, 0, 0, 2},  // .
}};
constexpr int kFontScale = 2;
constexpr int kTextHeight = 5 * kFontScale;

void draw_text(DocumentImage& img, int x, int y, const char* text, Rgb c) {
  for (const char* p = text; *p; ++p) {
    int g = -1;
    if (*p >= '0' && *p <= '9') g = *p - '0';
    if (*p == '.') g = 10;
    if (g >= 0) {
      for (int row = 0; row < 5; ++row) {
        for (int col = 0; col < 3; ++col) {
          if (!((kFont[static_cast<std::size_t>(g)][static_cast<std::size_t>(row)] >> (2 - col)) & 1)) continue;
          for (int dy = 0; dy < kFontScale; ++dy)
            for (int dx = 0; dx < kFontScale; ++dx) {
              const int px = x + col * kFontScale + dx, py = y + row * kFontScale + dy;
              if (img.contains(px, py)) img.set(px, py, c);
            }
        }
      }
    }
    x += 4 * kFontScale;
  }
}

}  // namespace

Rgb class_color(std::string_view name, geometry::ClassId id) {
  if (name == "table") return {0, 0, 255};
  if (name == "figure") return {0, 255, 0};
  if (name == "equation") return {255, 0, 0};
  constexpr std::array<Rgb, 4> kFallback{{{255, 128, 0}, {128, 0, 255}, {0, 200, 200}, {200, 0, 200}}};
  return kFallback[static_cast<std::size_t>(std::abs(id)) % kFallback.size()];
}

DocumentImage render(const DocumentImage& image, std::span<const RenderItem> items,
                     const geometry::LabelSet& labels) {
  DocumentImage out = image;
  if (out.empty()) return out;
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double sa = items[a].score.value_or(-std::numeric_limits<double>::infinity());
    const double sb = items[b].score.value_or(-std::numeric_limits<double>::infinity());
    return sa < sb;
  });
  const int W = out.width(), H = out.height();
  for (std::size_t i : order) {
    const RenderItem& it = items[i];
    if (!it.box.valid()) continue;
    const std::string_view name =
        it.label >= 0 && static_cast<std::size_t>(it.label) < labels.size()
            ? std::string_view(labels.name(it.label))
            : std::string_view();
    const Rgb c = class_color(name, it.label);
    const int x0 = std::clamp(static_cast<int>(std::floor(it.box.x_min)), 0, W - 1);
    const int y0 = std::clamp(static_cast<int>(std::floor(it.box.y_min)), 0, H - 1);
    const int x1 = std::clamp(static_cast<int>(std::ceil(it.box.x_max)) - 1, x0, W - 1);
    const int y1 = std::clamp(static_cast<int>(std::ceil(it.box.y_max)) - 1, y0, H - 1);
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        const int d = std::min(std::min(x - x0, x1 - x), std::min(y - y0, y1 - y));
        if (d < kOutlineWidth) out.set(x, y, c);
      }
    }
    if (it.score) {
      char text[16];
      std::snprintf(text, sizeof(text), "%.2f", std::clamp(*it.score, 0.0, 1.0));
      const int ty = y0 - kTextHeight - 2 >= 0 ? y0 - kTextHeight - 2 : y0 + kOutlineWidth + 1;
      draw_text(out, x0, ty, text, c);
    }
  }
  return out;
}

DocumentImage render(const AnnotatedDocument& doc,
                     std::span<const geometry::ScoredBox> detections,
                     const geometry::LabelSet& labels) {
  std::vector<RenderItem> items;
  items.reserve(detections.size());
  for (const auto& d : detections) items.push_back({d.box, d.label, d.score});
  return render(doc.image, items, labels);
}

DocumentImage render_annotations(const AnnotatedDocument& doc,
                                 const geometry::LabelSet& labels) {
  std::vector<RenderItem> items;
  for (const auto& a : doc.annotations) items.push_back({a.box, a.label, std::nullopt});
  return render(doc.image, items, labels);
}

}  // namespace docdet::data

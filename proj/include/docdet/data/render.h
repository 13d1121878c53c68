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

#ifndef DOCDET_DATA_RENDER_H_
#define DOCDET_DATA_RENDER_H_

#include <optional>
#include <span>
#include <string_view>

#include "docdet/data/image.h"
#include "docdet/geometry/box.h"

namespace docdet::data {

inline constexpr int kOutlineWidth = 3;

struct RenderItem {
  geometry::Box box;
  geometry::ClassId label = 0;
  std::optional<double> score;
};

// table -> blue, figure -> green, equation -> red; other names get a fixed
// fallback palette keyed by id.
Rgb class_color(std::string_view name, geometry::ClassId id);

// Draws 3-px outlines. Pixel columns floor(x_min)..ceil(x_max)-1 (likewise
// rows) form the outer edge of the band. Items are drawn in ascending score
// order (unscored first, stable), so higher scores end up on top. A score
// is printed just above its box, or inside the top edge when there is no
// room above.
DocumentImage render(const DocumentImage& image, std::span<const RenderItem> items,
                     const geometry::LabelSet& labels);

DocumentImage render(const AnnotatedDocument& doc,
                     std::span<const geometry::ScoredBox> detections,
                     const geometry::LabelSet& labels);

// Ground truth view: outlines without scores.
DocumentImage render_annotations(const AnnotatedDocument& doc,
                                 const geometry::LabelSet& labels);

}  // namespace docdet::data

#endif  // DOCDET_DATA_RENDER_H_

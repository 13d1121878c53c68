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

#include "docdet/geometry/box.h"

#include <algorithm>
#include <cmath>

#include "docdet/error.h"

namespace docdet::geometry {

bool Box::valid() const {
  return std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
         std::isfinite(y_max) && x_min <= x_max && y_min <= y_max;
}

Box scale_box(const Box& b, double sx, double sy) {
  return {b.x_min * sx, b.y_min * sy, b.x_max * sx, b.y_max * sy};
}

Box translate_box(const Box& b, double dx, double dy) {
  return {b.x_min + dx, b.y_min + dy, b.x_max + dx, b.y_max + dy};
}

LabelSet::LabelSet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty()) throw ConfigError("empty class name in label set");
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) {
        throw ConfigError("duplicate class name in label set: " + names_[i]);
      }
    }
  }
}

LabelSet LabelSet::document_objects() {
  return LabelSet({"table", "figure", "equation"});
}

const std::string& LabelSet::name(ClassId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= names_.size()) {
    throw ConfigError("class id " + std::to_string(id) + " outside label set");
  }
  return names_[static_cast<std::size_t>(id)];
}

std::optional<ClassId> LabelSet::find(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<ClassId>(it - names_.begin());
}

ClassId LabelSet::id(std::string_view name) const {
  if (auto found = find(name)) return *found;
  std::string known;
  for (const auto& n : names_) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown class '" + std::string(name) + "' (known: " +
                    known + ")");
}

bool LabelSet::contains_all(const LabelSet& other) const {
  return std::all_of(other.names_.begin(), other.names_.end(),
                     [&](const std::string& n) { return find(n).has_value(); });
}

double iou(const Box& a, const Box& b) {
  const double iw = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double ih = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (iw <= 0.0 || ih <= 0.0) return 0.0;
  const double inter = iw * ih;
  const double uni = a.area() + b.area() - inter;
  if (uni <= 0.0) return 0.0;
  return std::clamp(inter / uni, 0.0, 1.0);
}

Box clip_box(const Box& b, double width, double height) {
  return {std::clamp(b.x_min, 0.0, width), std::clamp(b.y_min, 0.0, height),
          std::clamp(b.x_max, 0.0, width), std::clamp(b.y_max, 0.0, height)};
}

}  // namespace docdet::geometry

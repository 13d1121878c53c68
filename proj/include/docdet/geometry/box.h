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

#ifndef DOCDET_GEOMETRY_BOX_H_
#define DOCDET_GEOMETRY_BOX_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace docdet::geometry {

// Axis-aligned rectangle in continuous pixel coordinates. Pixel (x, y)
// covers [x, x+1) x [y, y+1).
struct Box {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double width() const { return x_max - x_min; }
  double height() const { return y_max - y_min; }
  double area() const { return width() * height(); }
  double center_x() const { return 0.5 * (x_min + x_max); }
  double center_y() const { return 0.5 * (y_min + y_max); }

  // Finite coordinates with x_min <= x_max and y_min <= y_max.
  bool valid() const;

  bool operator==(const Box&) const = default;
};

Box scale_box(const Box& b, double sx, double sy);
Box translate_box(const Box& b, double dx, double dy);

using ClassId = int;

// Ordered set of category names. The position of a name is its stable
// integer id in every serialized artifact.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> names);

  // table, figure, equation.
  static LabelSet document_objects();

  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  const std::string& name(ClassId id) const;
  std::optional<ClassId> find(std::string_view name) const;
  ClassId id(std::string_view name) const;  // throws ConfigError
  const std::vector<std::string>& names() const { return names_; }
  bool contains_all(const LabelSet& other) const;

  bool operator==(const LabelSet&) const = default;

 private:
  std::vector<std::string> names_;
};

struct ScoredBox {
  Box box;
  ClassId label = 0;
  double score = 0.0;

  bool operator==(const ScoredBox&) const = default;
};

// Jaccard overlap. Zero when the boxes are disjoint or the union is empty.
double iou(const Box& a, const Box& b);

// Clamps every coordinate to [0, width] x [0, height].
Box clip_box(const Box& b, double width, double height);

}  // namespace docdet::geometry

#endif  // DOCDET_GEOMETRY_BOX_H_

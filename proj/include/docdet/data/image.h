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

#ifndef DOCDET_DATA_IMAGE_H_
#define DOCDET_DATA_IMAGE_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "docdet/geometry/box.h"

namespace docdet::data {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kWhite{255, 255, 255};

// 8-bit RGB raster, row-major, 3 bytes per pixel.
class DocumentImage {
 public:
  DocumentImage() = default;
  DocumentImage(int width, int height, Rgb fill = kWhite);
  DocumentImage(int width, int height, std::vector<std::uint8_t> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  bool empty() const { return width_ == 0 || height_ == 0; }

  Rgb at(int x, int y) const;
  void set(int x, int y, Rgb c);
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  const std::vector<std::uint8_t>& pixels() const { return pixels_; }
  std::vector<std::uint8_t>& pixels() { return pixels_; }

  bool operator==(const DocumentImage&) const = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct Annotation {
  geometry::Box box;
  geometry::ClassId label = 0;
  bool operator==(const Annotation&) const = default;
};

// A page with its ground truth. Labels index into the owning dataset's
// LabelSet.
struct AnnotatedDocument {
  std::string id;
  DocumentImage image;
  std::vector<Annotation> annotations;
};

}  // namespace docdet::data

#endif  // DOCDET_DATA_IMAGE_H_

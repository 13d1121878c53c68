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

#ifndef DOCDET_DETECTOR_PREPROCESS_H_
#define DOCDET_DETECTOR_PREPROCESS_H_

#include <vector>

#include "docdet/data/image.h"
#include "docdet/numerics/tensor.h"

namespace docdet::detector {

struct PreparedImage {
  numerics::Tensor image;  // [1, 3, size, size], values in [0, 1]
  double scale_x = 1.0;    // size / original width
  double scale_y = 1.0;
  int original_width = 0;
  int original_height = 0;
  std::vector<data::Annotation> annotations;  // in resized coordinates
};

// Bilinear resize with half-pixel centres: output pixel (x, y) samples the
// source at ((x + 0.5) / sx - 0.5, (y + 0.5) / sy - 0.5), edge-clamped.
PreparedImage preprocess(const data::AnnotatedDocument& doc, int size);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_PREPROCESS_H_

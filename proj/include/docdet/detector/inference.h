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

#ifndef DOCDET_DETECTOR_INFERENCE_H_
#define DOCDET_DETECTOR_INFERENCE_H_

#include <vector>

#include "docdet/data/image.h"
#include "docdet/detector/model.h"
#include "docdet/geometry/box.h"

namespace docdet::detector {

struct DetectOptions {
  double score_threshold = 0.05;  // keep class probability > threshold
  double nms_threshold = 0.3;     // per class
  int max_detections = 100;
  void validate() const;
};

// Boxes in the document's own pixel coordinates, clipped to the page,
// sorted by descending score. Never emits background. Reads the model only,
// so concurrent calls on one model are safe.
std::vector<geometry::ScoredBox> detect(const DetectorModel& model, const data::DocumentImage& image,
                                        const DetectOptions& opts);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_INFERENCE_H_

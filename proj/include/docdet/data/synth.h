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

#ifndef DOCDET_DATA_SYNTH_H_
#define DOCDET_DATA_SYNTH_H_

#include <cstdint>

#include "docdet/data/image.h"
#include "docdet/geometry/box.h"

namespace docdet::data {

struct CountRange {
  int min = 0;
  int max = 0;
};

struct TableStyleMix {
  double ruled = 0.4;
  double unruled = 0.3;
  double alternating = 0.3;
};

struct FigureStyleMix {
  double plot = 0.6;
  double blob = 0.4;
};

struct EquationStyle {
  int glyph_height = 12;
  double superscript_probability = 0.35;
  double fraction_probability = 0.3;
  Rgb ink{15, 15, 15};
};

// Synthetic page generator settings. Labels are always
// LabelSet::document_objects() (table, figure, equation).
struct SynthConfig {
  int page_width = 612;
  int page_height = 792;
  CountRange tables{0, 2};
  CountRange figures{0, 2};
  CountRange equations{0, 3};
  TableStyleMix table_mix;
  FigureStyleMix figure_mix;
  EquationStyle equation;
  double two_column_probability = 0.3;
  int text_gray = 125;
  int rule_thickness = 1;
  Rgb table_ink{40, 40, 40};
  Rgb alternating_fill{222, 230, 244};
  int figure_palette = 0;  // 0 or 1
  std::uint64_t seed = 1;

  void validate() const;  // throws ConfigError

  // Different visual conventions for the same three classes: thicker rules,
  // other fills and palettes, darker text, mostly two-column layout.
  static SynthConfig style_shifted();
};

// Pure function of (cfg, index). Throws ConfigError when the page cannot
// hold the minimum object counts.
AnnotatedDocument synth_page(const SynthConfig& cfg, std::uint64_t index);

}  // namespace docdet::data

#endif  // DOCDET_DATA_SYNTH_H_

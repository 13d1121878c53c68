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

#ifndef DOCDET_DATA_PNG_IO_H_
#define DOCDET_DATA_PNG_IO_H_

#include <filesystem>
#include <utility>

#include "docdet/data/image.h"

namespace docdet::data {

// Any PNG colour type / bit depth is converted to 8-bit RGB.
DocumentImage read_png(const std::filesystem::path& path);
// (width, height) from the header only.
std::pair<int, int> read_png_size(const std::filesystem::path& path);
// Atomic: temp file + rename.
void write_png(const std::filesystem::path& path, const DocumentImage& image);

}  // namespace docdet::data

#endif  // DOCDET_DATA_PNG_IO_H_

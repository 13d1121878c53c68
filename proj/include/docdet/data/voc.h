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

#ifndef DOCDET_DATA_VOC_H_
#define DOCDET_DATA_VOC_H_

#include <filesystem>

#include "docdet/data/manifest.h"

namespace docdet::data {

// Reads every *.xml in `dir` (sorted by name). Image filenames resolve
// against `dir`. Class names outside `labels` are rejected with a listing.
DatasetManifest import_voc_xml(const std::filesystem::path& dir,
                               const geometry::LabelSet& labels =
                                   geometry::LabelSet::document_objects(),
                               LoadReport* report = nullptr);

// One <id>.xml per entry. Coordinates are written in shortest round-trip
// form, so importing the result reproduces every box exactly.
void export_voc_xml(const DatasetManifest& m, const std::filesystem::path& dir);

}  // namespace docdet::data

#endif  // DOCDET_DATA_VOC_H_

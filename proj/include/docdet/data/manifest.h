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

#ifndef DOCDET_DATA_MANIFEST_H_
#define DOCDET_DATA_MANIFEST_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "docdet/data/image.h"
#include "docdet/geometry/box.h"

namespace docdet::data {

inline constexpr std::string_view kManifestSchema = "docdet.manifest";
inline constexpr int kManifestVersion = 1;

enum class Split { kTrain, kTest };

std::string_view split_name(Split s);
Split parse_split(std::string_view s);  // throws DataError

struct ManifestEntry {
  std::string id;
  // As written in the manifest; relative paths resolve against the
  // manifest's directory.
  std::string image;
  int width = 0;
  int height = 0;
  std::vector<Annotation> objects;

  bool operator==(const ManifestEntry&) const = default;
};

struct DatasetManifest {
  std::string name;
  geometry::LabelSet labels;
  Split split = Split::kTrain;
  std::vector<ManifestEntry> entries;
  // Directory relative image paths resolve against. Not serialized.
  std::filesystem::path base_dir;

  std::filesystem::path image_path(const ManifestEntry& e) const;
  std::size_t object_count() const;

  // Structural equality; base_dir is ignored.
  bool operator==(const DatasetManifest& o) const {
    return name == o.name && labels == o.labels && split == o.split &&
           entries == o.entries;
  }
};

struct LoadReport {
  std::size_t clipped_boxes = 0;
};

// Parses and validates; every image must exist with the recorded size.
DatasetManifest load_manifest(const std::filesystem::path& path,
                              LoadReport* report = nullptr);
DatasetManifest parse_manifest(std::string_view text,
                               const std::filesystem::path& base_dir,
                               const std::string& origin,
                               LoadReport* report = nullptr);

// Checks ids, labels, box validity and image files; clips boxes in place.
void validate_manifest(DatasetManifest& m, LoadReport* report = nullptr);

// Image paths are rebased so they stay valid relative to the new location.
void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);
std::string format_manifest(const DatasetManifest& m);

AnnotatedDocument load_document(const DatasetManifest& m, std::size_t index);

}  // namespace docdet::data

#endif  // DOCDET_DATA_MANIFEST_H_

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

#ifndef DOCDET_DETECTOR_SERIALIZE_H_
#define DOCDET_DETECTOR_SERIALIZE_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "docdet/detector/config.h"
#include "docdet/detector/model.h"

namespace docdet::detector {

inline constexpr char kModelSchema[] = "docdet.model";
inline constexpr int kModelSchemaVersion = 1;

// JSON object with every architecture field; stored as checkpoint metadata.
std::string config_to_json(const DetectorConfig& cfg);
// Throws DataError naming `origin` on malformed input.
DetectorConfig config_from_json(const std::string& text, const std::string& origin);

void save_model(const std::filesystem::path& path, const DetectorModel& model);
// Rebuilds the architecture from the metadata, then checks that every
// parameter is present with the expected shape.
DetectorModel load_model(const std::filesystem::path& path);

// FNV-1a over the raw bytes of all parameter values, for determinism checks.
std::uint64_t parameter_checksum(const DetectorModel& model);

}  // namespace docdet::detector

#endif  // DOCDET_DETECTOR_SERIALIZE_H_

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

#ifndef DOCDET_NUMERICS_CHECKPOINT_H_
#define DOCDET_NUMERICS_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "docdet/numerics/tensor.h"

namespace docdet::numerics {

// Binary parameter file; layout in docs/checkpoint_format.md. All integers
// are unsigned little-endian, tensor data is IEEE-754 binary64
// little-endian.
inline constexpr char kCheckpointMagic[8] = {'D', 'O', 'C', 'D', 'E', 'T', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

struct NamedTensor {
  std::string name;
  Tensor value;
};

struct CheckpointContents {
  std::string metadata;  // free-form text, the detector stores JSON here
  std::vector<NamedTensor> entries;
};

std::string encode_checkpoint(const CheckpointContents& contents);
// Throws DataError with the byte offset of the first inconsistency.
CheckpointContents decode_checkpoint(std::span<const unsigned char> bytes);

void save_checkpoint(const std::filesystem::path& path,
                     const CheckpointContents& contents);
CheckpointContents load_checkpoint(const std::filesystem::path& path);

}  // namespace docdet::numerics

#endif  // DOCDET_NUMERICS_CHECKPOINT_H_

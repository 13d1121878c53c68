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

#ifndef DOCDET_DATA_SPLIT_H_
#define DOCDET_DATA_SPLIT_H_

#include <cstdint>
#include <utility>

#include "docdet/data/manifest.h"

namespace docdet::data {

// Seeded shuffle, then the first round(fraction * n) entries go to train.
// Each side keeps the original entry order. Requires 0 < fraction < 1.
std::pair<DatasetManifest, DatasetManifest> split(const DatasetManifest& m,
                                                  double train_fraction,
                                                  std::uint64_t seed);

}  // namespace docdet::data

#endif  // DOCDET_DATA_SPLIT_H_

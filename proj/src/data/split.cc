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

#include "docdet/data/split.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "docdet/error.h"

namespace docdet::data {

std::pair<DatasetManifest, DatasetManifest> split(const DatasetManifest& m,
                                                  double train_fraction,
                                                  std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("train fraction must lie in (0, 1)");
  }
  const std::size_t n = m.entries.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  // Fisher-Yates with a fixed engine; std::shuffle is not portable across
  // standard libraries.
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(order[i - 1], order[j]);
  }
  const std::size_t n_train = static_cast<std::size_t>(std::llround(train_fraction * n));
  std::vector<std::size_t> train(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> test(order.begin() + n_train, order.end());
  std::sort(train.begin(), train.end());
  std::sort(test.begin(), test.end());

  auto take = [&](const std::vector<std::size_t>& idx, Split s, const char* suffix) {
    DatasetManifest out;
    out.name = m.name + suffix;
    out.labels = m.labels;
    out.split = s;
    out.base_dir = m.base_dir;
    for (std::size_t i : idx) out.entries.push_back(m.entries[i]);
    return out;
  };
  return {take(train, Split::kTrain, "-train"), take(test, Split::kTest, "-test")};
}

}  // namespace docdet::data

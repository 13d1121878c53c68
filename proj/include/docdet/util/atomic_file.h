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

#ifndef DOCDET_UTIL_ATOMIC_FILE_H_
#define DOCDET_UTIL_ATOMIC_FILE_H_

#include <filesystem>
#include <functional>
#include <string_view>

namespace docdet::util {

// Writes through a temporary sibling file, then renames it over `path`, so
// readers never observe a partial file. `write` receives the temp path.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(const std::filesystem::path&)>& write);

void write_text_atomically(const std::filesystem::path& path,
                           std::string_view contents);

}  // namespace docdet::util

#endif  // DOCDET_UTIL_ATOMIC_FILE_H_

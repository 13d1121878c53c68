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

#ifndef DOCDET_UTIL_KV_CONFIG_H_
#define DOCDET_UTIL_KV_CONFIG_H_

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace docdet::util {

// Plain-text key/value file:
//
//   # comment
//   key = value
//
// Blank lines and lines starting with '#' are ignored. Keys are unique;
// whitespace around keys and values is trimmed. Entries keep file order.
using KeyValues = std::vector<std::pair<std::string, std::string>>;

KeyValues parse_key_values(const std::string& text, const std::string& origin);
KeyValues load_key_values(const std::filesystem::path& path);
std::string format_key_values(const KeyValues& kv);

}  // namespace docdet::util

#endif  // DOCDET_UTIL_KV_CONFIG_H_

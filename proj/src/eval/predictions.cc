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

#include "docdet/eval/predictions.h"

#include <fstream>
#include <iterator>

#include "docdet/error.h"
#include "docdet/util/atomic_file.h"
#include "json.hpp"

namespace docdet::eval {
namespace {

using nlohmann::json;

double number_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw DataError(where + ": field '" + key + "' missing or not a number");
  }
  return it->get<double>();
}

std::string string_field(const json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw DataError(where + ": field '" + key + "' missing or not a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::vector<Prediction> parse_predictions(std::string_view text, const std::string& origin) {
  std::vector<Prediction> out;
  std::size_t line_no = 0, pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    const std::string where = origin + ":" + std::to_string(line_no);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw DataError(where + ": JSON parse error: " + e.what());
    }
    if (!j.is_object()) throw DataError(where + ": expected a JSON object");
    Prediction p;
    p.image = string_field(j, "image", where);
    p.label = string_field(j, "label", where);
    p.score = number_field(j, "score", where);
    p.box = {number_field(j, "x_min", where), number_field(j, "y_min", where),
             number_field(j, "x_max", where), number_field(j, "y_max", where)};
    if (!(p.score >= 0.0 && p.score <= 1.0)) throw DataError(where + ": score outside [0, 1]");
    if (!p.box.valid()) throw DataError(where + ": box requires x_min <= x_max, y_min <= y_max");
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open predictions " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_predictions(text, path.string());
}

std::string format_prediction(const Prediction& p) {
  json j;
  j["image"] = p.image;
  j["label"] = p.label;
  j["score"] = p.score;
  j["x_min"] = p.box.x_min;
  j["y_min"] = p.box.y_min;
  j["x_max"] = p.box.x_max;
  j["y_max"] = p.box.y_max;
  return j.dump();
}

void write_predictions(const std::filesystem::path& path, std::span<const Prediction> preds) {
  std::string text;
  for (const auto& p : preds) text += format_prediction(p) + "\n";
  util::write_text_atomically(path, text);
}

}  // namespace docdet::eval

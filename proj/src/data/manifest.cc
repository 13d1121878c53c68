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

#include "docdet/data/manifest.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include "docdet/data/png_io.h"
#include "docdet/error.h"
#include "docdet/util/atomic_file.h"
#include "json.hpp"

namespace docdet::data {
namespace {

using nlohmann::json;

[[noreturn]] void field_error(const std::string& origin, const std::string& field,
                              const std::string& msg) {
  throw DataError(origin + ": " + field + ": " + msg);
}

const json& require(const json& obj, const char* key, const std::string& origin,
                    const std::string& where) {
  if (!obj.is_object()) field_error(origin, where, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) field_error(origin, where + "." + key, "missing field");
  return *it;
}

std::string require_string(const json& obj, const char* key,
                           const std::string& origin, const std::string& where) {
  const json& v = require(obj, key, origin, where);
  if (!v.is_string()) field_error(origin, where + "." + key, "expected a string");
  return v.get<std::string>();
}

int require_dim(const json& obj, const char* key, const std::string& origin,
                const std::string& where) {
  const json& v = require(obj, key, origin, where);
  if (!v.is_number_integer() || v.get<long long>() < 1 ||
      v.get<long long>() > 1'000'000) {
    field_error(origin, where + "." + key, "expected a positive integer");
  }
  return v.get<int>();
}

std::string known_labels(const geometry::LabelSet& labels) {
  std::string out;
  for (const auto& n : labels.names()) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

std::filesystem::path normalized_absolute(const std::filesystem::path& p) {
  return std::filesystem::absolute(p).lexically_normal();
}

}  // namespace

std::string_view split_name(Split s) { return s == Split::kTrain ? "train" : "test"; }

Split parse_split(std::string_view s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  throw DataError("split must be 'train' or 'test', got '" + std::string(s) + "'");
}

std::filesystem::path DatasetManifest::image_path(const ManifestEntry& e) const {
  std::filesystem::path p(e.image);
  if (p.is_absolute() || base_dir.empty()) return p;
  return base_dir / p;
}

std::size_t DatasetManifest::object_count() const {
  std::size_t n = 0;
  for (const auto& e : entries) n += e.objects.size();
  return n;
}

DatasetManifest parse_manifest(std::string_view text,
                               const std::filesystem::path& base_dir,
                               const std::string& origin, LoadReport* report) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::size_t byte = std::min<std::size_t>(e.byte, text.size());
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw DataError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                    ": JSON parse error: " + e.what());
  }
  if (!doc.is_object()) field_error(origin, "$", "expected a JSON object");
  if (require_string(doc, "schema", origin, "$") != kManifestSchema) {
    field_error(origin, "$.schema", "expected \"" + std::string(kManifestSchema) + "\"");
  }
  const json& version = require(doc, "version", origin, "$");
  if (!version.is_number_integer() || version.get<int>() != kManifestVersion) {
    field_error(origin, "$.version",
                "unsupported version (expected " + std::to_string(kManifestVersion) + ")");
  }

  DatasetManifest m;
  m.base_dir = base_dir;
  m.name = require_string(doc, "name", origin, "$");
  try {
    m.split = parse_split(require_string(doc, "split", origin, "$"));
  } catch (const DataError& e) {
    field_error(origin, "$.split", e.what());
  }
  const json& labels = require(doc, "labels", origin, "$");
  if (!labels.is_array() || labels.empty()) {
    field_error(origin, "$.labels", "expected a non-empty array of strings");
  }
  std::vector<std::string> names;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (!labels[i].is_string()) {
      field_error(origin, "$.labels[" + std::to_string(i) + "]", "expected a string");
    }
    names.push_back(labels[i].get<std::string>());
  }
  try {
    m.labels = geometry::LabelSet(names);
  } catch (const ConfigError& e) {
    field_error(origin, "$.labels", e.what());
  }

  const json& entries = require(doc, "entries", origin, "$");
  if (!entries.is_array()) field_error(origin, "$.entries", "expected an array");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const std::string where = "$.entries[" + std::to_string(i) + "]";
    const json& ej = entries[i];
    ManifestEntry e;
    e.id = require_string(ej, "id", origin, where);
    e.image = require_string(ej, "image", origin, where);
    e.width = require_dim(ej, "width", origin, where);
    e.height = require_dim(ej, "height", origin, where);
    const json& objects = require(ej, "objects", origin, where);
    if (!objects.is_array()) field_error(origin, where + ".objects", "expected an array");
    for (std::size_t j = 0; j < objects.size(); ++j) {
      const std::string ow = where + ".objects[" + std::to_string(j) + "]";
      const std::string label = require_string(objects[j], "label", origin, ow);
      const auto id = m.labels.find(label);
      if (!id) {
        field_error(origin, ow + ".label",
                    "unknown label '" + label + "' (known: " + known_labels(m.labels) + ")");
      }
      const json& box = require(objects[j], "box", origin, ow);
      if (!box.is_array() || box.size() != 4 ||
          !std::all_of(box.begin(), box.end(), [](const json& v) { return v.is_number(); })) {
        field_error(origin, ow + ".box", "expected [x_min, y_min, x_max, y_max]");
      }
      Annotation a;
      a.box = {box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
               box[3].get<double>()};
      a.label = *id;
      if (!a.box.valid()) {
        field_error(origin, ow + ".box", "requires x_min <= x_max and y_min <= y_max");
      }
      e.objects.push_back(a);
    }
    m.entries.push_back(std::move(e));
  }
  validate_manifest(m, report);
  return m;
}

void validate_manifest(DatasetManifest& m, LoadReport* report) {
  if (m.labels.empty()) throw DataError("manifest '" + m.name + "' has no labels");
  std::set<std::string> ids;
  std::vector<std::string> missing;
  std::size_t clipped = 0;
  for (std::size_t i = 0; i < m.entries.size(); ++i) {
    ManifestEntry& e = m.entries[i];
    if (e.id.empty()) throw DataError("entry " + std::to_string(i) + " has an empty id");
    if (!ids.insert(e.id).second) throw DataError("duplicate entry id '" + e.id + "'");
    if (e.width < 1 || e.height < 1) {
      throw DataError("entry '" + e.id + "' has non-positive image size");
    }
    for (Annotation& a : e.objects) {
      if (a.label < 0 || static_cast<std::size_t>(a.label) >= m.labels.size()) {
        throw DataError("entry '" + e.id + "' has label id " + std::to_string(a.label) +
                        " outside the label set (known: " + known_labels(m.labels) + ")");
      }
      if (!a.box.valid()) throw DataError("entry '" + e.id + "' has an invalid box");
      const geometry::Box c = geometry::clip_box(a.box, e.width, e.height);
      if (!(c == a.box)) {
        a.box = c;
        ++clipped;
      }
    }
    const std::filesystem::path p = m.image_path(e);
    std::error_code ec;
    if (!std::filesystem::is_regular_file(p, ec)) {
      missing.push_back(p.string());
      continue;
    }
    const auto [w, h] = read_png_size(p);
    if (w != e.width || h != e.height) {
      throw DataError("entry '" + e.id + "': image " + p.string() + " is " +
                      std::to_string(w) + "x" + std::to_string(h) + ", manifest says " +
                      std::to_string(e.width) + "x" + std::to_string(e.height));
    }
  }
  if (!missing.empty()) {
    std::string msg = "missing image files (" + std::to_string(missing.size()) + "):";
    for (const auto& p : missing) msg += " " + p;
    throw DataError(msg);
  }
  if (report) report->clipped_boxes += clipped;
}

DatasetManifest load_manifest(const std::filesystem::path& path, LoadReport* report) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open manifest " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_manifest(text, path.parent_path(), path.string(), report);
}

namespace {

json to_json(const DatasetManifest& m, const std::filesystem::path* target_dir) {
  json doc;
  doc["schema"] = kManifestSchema;
  doc["version"] = kManifestVersion;
  doc["name"] = m.name;
  doc["split"] = split_name(m.split);
  doc["labels"] = m.labels.names();
  json entries = json::array();
  for (const auto& e : m.entries) {
    std::string image = e.image;
    const std::filesystem::path p(e.image);
    if (target_dir && !p.is_absolute() && !m.base_dir.empty()) {
      const auto abs = normalized_absolute(m.base_dir / p);
      const auto rel = abs.lexically_relative(*target_dir);
      image = rel.empty() ? abs.string() : rel.generic_string();
    }
    json objects = json::array();
    for (const auto& a : e.objects) {
      objects.push_back({{"label", m.labels.name(a.label)},
                         {"box", {a.box.x_min, a.box.y_min, a.box.x_max, a.box.y_max}}});
    }
    entries.push_back({{"id", e.id},
                       {"image", image},
                       {"width", e.width},
                       {"height", e.height},
                       {"objects", std::move(objects)}});
  }
  doc["entries"] = std::move(entries);
  return doc;
}

}  // namespace

std::string format_manifest(const DatasetManifest& m) {
  return to_json(m, nullptr).dump(1) + "\n";
}

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  const auto dir = normalized_absolute(path).parent_path();
  util::write_text_atomically(path, to_json(m, &dir).dump(1) + "\n");
}

AnnotatedDocument load_document(const DatasetManifest& m, std::size_t index) {
  if (index >= m.entries.size()) {
    throw DataError("entry index " + std::to_string(index) + " out of range");
  }
  const ManifestEntry& e = m.entries[index];
  AnnotatedDocument doc;
  doc.id = e.id;
  doc.image = read_png(m.image_path(e));
  if (doc.image.width() != e.width || doc.image.height() != e.height) {
    throw DataError("entry '" + e.id + "': image size changed since load");
  }
  doc.annotations = e.objects;
  return doc;
}

}  // namespace docdet::data

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

#include "docdet/data/voc.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "docdet/error.h"
#include "docdet/util/atomic_file.h"

namespace docdet::data {
namespace {

namespace pt = boost::property_tree;

double parse_number(const std::string& raw, const std::string& file,
                    const std::string& field) {
  std::string s = raw;
  s.erase(0, s.find_first_not_of(" \t\r\n"));
  s.erase(s.find_last_not_of(" \t\r\n") + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw DataError(file + ": field " + field + ": not a number: '" + raw + "'");
  }
  return v;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

int parse_dim(const pt::ptree& tree, const std::string& key, const std::string& file) {
  const auto raw = tree.get_optional<std::string>(key);
  if (!raw) throw DataError(file + ": missing " + key);
  const double v = parse_number(*raw, file, key);
  if (v < 1 || v != static_cast<int>(v)) {
    throw DataError(file + ": " + key + " must be a positive integer");
  }
  return static_cast<int>(v);
}

}  // namespace

DatasetManifest import_voc_xml(const std::filesystem::path& dir,
                               const geometry::LabelSet& labels, LoadReport* report) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw DataError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  DatasetManifest m;
  m.name = dir.filename().empty() ? dir.parent_path().filename().string()
                                  : dir.filename().string();
  m.labels = labels;
  m.split = Split::kTrain;
  m.base_dir = dir;
  std::map<std::string, std::set<std::string>> unknown;  // class -> files

  for (const auto& file : files) {
    const std::string fname = file.string();
    pt::ptree tree;
    try {
      pt::read_xml(fname, tree, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
      throw DataError("malformed XML in " + fname + ": " + e.message() + " (line " +
                      std::to_string(e.line()) + ")");
    }
    const auto root = tree.get_child_optional("annotation");
    if (!root) throw DataError(fname + ": missing <annotation> root");
    ManifestEntry e;
    e.id = file.stem().string();
    const auto filename = root->get_optional<std::string>("filename");
    if (!filename || filename->empty()) throw DataError(fname + ": missing <filename>");
    e.image = *filename;
    const auto size = root->get_child_optional("size");
    if (!size) throw DataError(fname + ": missing <size>");
    e.width = parse_dim(*size, "width", fname);
    e.height = parse_dim(*size, "height", fname);
    for (const auto& [key, obj] : *root) {
      if (key != "object") continue;
      const auto name = obj.get_optional<std::string>("name");
      if (!name) throw DataError(fname + ": <object> without <name>");
      const auto bnd = obj.get_child_optional("bndbox");
      if (!bnd) throw DataError(fname + ": <object> without <bndbox>");
      Annotation a;
      const char* keys[4] = {"xmin", "ymin", "xmax", "ymax"};
      double v[4];
      for (int k = 0; k < 4; ++k) {
        const auto raw = bnd->get_optional<std::string>(keys[k]);
        if (!raw) throw DataError(fname + ": <bndbox> missing <" + keys[k] + ">");
        v[k] = parse_number(*raw, fname, keys[k]);
      }
      a.box = {v[0], v[1], v[2], v[3]};
      if (!a.box.valid()) throw DataError(fname + ": inverted or non-finite <bndbox>");
      const auto id = labels.find(*name);
      if (!id) {
        unknown[*name].insert(file.filename().string());
        continue;
      }
      a.label = *id;
      e.objects.push_back(a);
    }
    m.entries.push_back(std::move(e));
  }
  if (!unknown.empty()) {
    std::ostringstream msg;
    msg << "unknown class names (allowed:";
    for (const auto& n : labels.names()) msg << ' ' << n;
    msg << "):";
    for (const auto& [name, where] : unknown) {
      msg << " '" << name << "' in";
      for (const auto& w : where) msg << ' ' << w;
      msg << ';';
    }
    throw DataError(msg.str());
  }
  validate_manifest(m, report);
  return m;
}

void export_voc_xml(const DatasetManifest& m, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto abs_dir = std::filesystem::absolute(dir).lexically_normal();
  for (const auto& e : m.entries) {
    pt::ptree root;
    const auto img = std::filesystem::absolute(m.image_path(e)).lexically_normal();
    const auto rel = img.lexically_relative(abs_dir);
    root.put("annotation.filename", rel.empty() ? img.string() : rel.generic_string());
    root.put("annotation.size.width", e.width);
    root.put("annotation.size.height", e.height);
    root.put("annotation.size.depth", 3);
    for (const auto& a : e.objects) {
      pt::ptree obj;
      obj.put("name", m.labels.name(a.label));
      obj.put("bndbox.xmin", format_number(a.box.x_min));
      obj.put("bndbox.ymin", format_number(a.box.y_min));
      obj.put("bndbox.xmax", format_number(a.box.x_max));
      obj.put("bndbox.ymax", format_number(a.box.y_max));
      root.add_child("annotation.object", obj);
    }
    std::ostringstream out;
    pt::write_xml(out, root, pt::xml_writer_make_settings<std::string>(' ', 2));
    util::write_text_atomically(dir / (e.id + ".xml"), out.str());
  }
}

}  // namespace docdet::data

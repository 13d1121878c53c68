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

#include "docdet/detector/serialize.h"

#include <cstring>
#include <set>

#include "docdet/error.h"
#include "docdet/numerics/checkpoint.h"
#include "json.hpp"

namespace docdet::detector {

using nlohmann::json;

namespace {

json layer_to_json(const LayerSpec& l) {
  if (l.kind == LayerSpec::Kind::kMaxPool) {
    return {{"kind", "maxpool"}, {"kernel", l.kernel}, {"stride", l.stride}};
  }
  return {{"kind", "conv"}, {"out_channels", l.out_channels}, {"kernel", l.kernel},
          {"stride", l.stride}, {"padding", l.padding}, {"relu", l.relu}};
}

LayerSpec layer_from_json(const json& j) {
  LayerSpec l;
  const std::string kind = j.at("kind").get<std::string>();
  l.kernel = j.at("kernel").get<int>();
  l.stride = j.at("stride").get<int>();
  if (kind == "maxpool") {
    l.kind = LayerSpec::Kind::kMaxPool;
    l.relu = false;
  } else if (kind == "conv") {
    l.out_channels = j.at("out_channels").get<int>();
    l.padding = j.at("padding").get<int>();
    l.relu = j.at("relu").get<bool>();
  } else {
    throw DataError("unknown layer kind '" + kind + "'");
  }
  return l;
}

}  // namespace

std::string config_to_json(const DetectorConfig& c) {
  json layers = json::array();
  for (const LayerSpec& l : c.backbone.layers) layers.push_back(layer_to_json(l));
  const json j = {
      {"schema", kModelSchema},
      {"version", kModelSchemaVersion},
      {"backbone", {{"preset", c.backbone.preset}, {"in_channels", c.backbone.in_channels},
                    {"layers", layers}}},
      {"anchors", {{"scales", c.anchors.scales}, {"ratios", c.anchors.ratios},
                   {"stride", c.anchors.stride}}},
      {"rpn_channels", c.rpn_channels},
      {"head_hidden", c.head_hidden},
      {"roi", {{"mode", std::string(roi_mode_name(c.roi.mode))}, {"output_h", c.roi.output_h},
               {"output_w", c.roi.output_w}, {"samples_per_bin", c.roi.samples_per_bin}}},
      {"proposals", {{"pre_nms_top_n", c.proposals.pre_nms_top_n},
                     {"post_nms_top_n", c.proposals.post_nms_top_n},
                     {"nms_threshold", c.proposals.nms_threshold},
                     {"min_box_size", c.proposals.min_box_size}}},
      {"match", {{"positive_iou", c.match.positive_iou}, {"negative_iou", c.match.negative_iou},
                 {"rpn_batch", c.match.rpn_batch}, {"positive_fraction", c.match.positive_fraction},
                 {"head_positive_iou", c.match.head_positive_iou}, {"head_batch", c.match.head_batch},
                 {"head_positive_fraction", c.match.head_positive_fraction}}},
      {"labels", c.labels.names()},
      {"input_size", c.input_size},
      {"head_delta_weights", c.head_delta_weights},
  };
  return j.dump(2);
}

DetectorConfig config_from_json(const std::string& text, const std::string& origin) {
  DetectorConfig c;
  try {
    const json j = json::parse(text);
    if (j.at("schema").get<std::string>() != kModelSchema) {
      throw DataError("not a " + std::string(kModelSchema) + " document");
    }
    if (j.at("version").get<int>() != kModelSchemaVersion) {
      throw DataError("unsupported model version " + std::to_string(j.at("version").get<int>()));
    }
    const json& b = j.at("backbone");
    c.backbone.preset = b.at("preset").get<std::string>();
    c.backbone.in_channels = b.at("in_channels").get<int>();
    c.backbone.layers.clear();
    for (const json& l : b.at("layers")) c.backbone.layers.push_back(layer_from_json(l));
    const json& a = j.at("anchors");
    c.anchors.scales = a.at("scales").get<std::vector<double>>();
    c.anchors.ratios = a.at("ratios").get<std::vector<double>>();
    c.anchors.stride = a.at("stride").get<int>();
    c.rpn_channels = j.at("rpn_channels").get<int>();
    c.head_hidden = j.at("head_hidden").get<int>();
    const json& r = j.at("roi");
    c.roi.mode = parse_roi_mode(r.at("mode").get<std::string>());
    c.roi.output_h = r.at("output_h").get<int>();
    c.roi.output_w = r.at("output_w").get<int>();
    c.roi.samples_per_bin = r.at("samples_per_bin").get<int>();
    const json& p = j.at("proposals");
    c.proposals.pre_nms_top_n = p.at("pre_nms_top_n").get<int>();
    c.proposals.post_nms_top_n = p.at("post_nms_top_n").get<int>();
    c.proposals.nms_threshold = p.at("nms_threshold").get<double>();
    c.proposals.min_box_size = p.at("min_box_size").get<double>();
    const json& m = j.at("match");
    c.match.positive_iou = m.at("positive_iou").get<double>();
    c.match.negative_iou = m.at("negative_iou").get<double>();
    c.match.rpn_batch = m.at("rpn_batch").get<int>();
    c.match.positive_fraction = m.at("positive_fraction").get<double>();
    c.match.head_positive_iou = m.at("head_positive_iou").get<double>();
    c.match.head_batch = m.at("head_batch").get<int>();
    c.match.head_positive_fraction = m.at("head_positive_fraction").get<double>();
    c.labels = geometry::LabelSet(j.at("labels").get<std::vector<std::string>>());
    c.input_size = j.at("input_size").get<int>();
    c.head_delta_weights = j.at("head_delta_weights").get<std::array<double, 4>>();
    c.validate();
  } catch (const json::exception& e) {
    throw DataError(origin + ": bad model config: " + e.what());
  } catch (const ConfigError& e) {
    throw DataError(origin + ": bad model config: " + e.what());
  } catch (const DataError& e) {
    throw DataError(origin + ": " + e.what());
  }
  return c;
}

void save_model(const std::filesystem::path& path, const DetectorModel& model) {
  numerics::CheckpointContents c;
  c.metadata = config_to_json(model.config);
  for (const numerics::Parameter* p : model.parameters()) c.entries.push_back({p->name, p->value});
  numerics::save_checkpoint(path, c);
}

DetectorModel load_model(const std::filesystem::path& path) {
  const numerics::CheckpointContents c = numerics::load_checkpoint(path);
  const DetectorConfig cfg = config_from_json(c.metadata, path.string());
  DetectorModel m = create_model(cfg, 0);
  std::vector<numerics::Parameter*> params = m.parameters();
  if (c.entries.size() != params.size()) {
    throw DataError(path.string() + ": checkpoint has " + std::to_string(c.entries.size()) +
                    " tensors, the architecture needs " + std::to_string(params.size()));
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    const numerics::NamedTensor& e = c.entries[i];
    if (e.name != params[i]->name) {
      throw DataError(path.string() + ": tensor " + std::to_string(i) + " is '" + e.name +
                      "', expected '" + params[i]->name + "'");
    }
    if (e.value.shape() != params[i]->value.shape()) {
      throw DataError(path.string() + ": tensor '" + e.name + "' has shape " +
                      numerics::shape_to_string(e.value.shape()) + ", expected " +
                      numerics::shape_to_string(params[i]->value.shape()));
    }
    params[i]->value = e.value;
  }
  return m;
}

std::uint64_t parameter_checksum(const DetectorModel& model) {
  std::uint64_t h = 1469598103934665603ull;
  for (const numerics::Parameter* p : model.parameters()) {
    for (double v : p->value.values()) {
      unsigned char bytes[sizeof(double)];
      std::memcpy(bytes, &v, sizeof v);
      for (unsigned char b : bytes) {
        h ^= b;
        h *= 1099511628211ull;
      }
    }
  }
  return h;
}

}  // namespace docdet::detector

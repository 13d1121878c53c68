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

#include "docdet/detector/model.h"

#include <cmath>
#include <random>

namespace docdet::detector {
namespace {

using numerics::Parameter;
using numerics::Shape;
using numerics::Tensor;

Layer make_layer(const std::string& name, Shape weight_shape, double stddev,
                 std::mt19937_64& rng) {
  Tensor w(weight_shape);
  std::normal_distribution<double> n(0.0, stddev);
  for (double& v : w.values()) v = n(rng);
  return {Parameter(name + ".weight", std::move(w)),
          Parameter(name + ".bias", Tensor({weight_shape[0]}))};
}

double he(std::size_t fan_in) { return std::sqrt(2.0 / static_cast<double>(fan_in)); }

}  // namespace

std::vector<Parameter*> DetectorModel::parameters() {
  std::vector<Parameter*> out;
  for (Layer& l : backbone) {
    out.push_back(&l.weight);
    out.push_back(&l.bias);
  }
  for (Layer* l : {&rpn_conv, &rpn_cls, &rpn_reg, &head_fc, &head_cls, &head_reg}) {
    out.push_back(&l->weight);
    out.push_back(&l->bias);
  }
  return out;
}

std::vector<const Parameter*> DetectorModel::parameters() const {
  std::vector<const Parameter*> out;
  for (Parameter* p : const_cast<DetectorModel*>(this)->parameters()) out.push_back(p);
  return out;
}

void DetectorModel::zero_grad() {
  for (Parameter* p : parameters()) p->zero_grad();
}

std::size_t DetectorModel::parameter_count() const {
  std::size_t n = 0;
  for (const Parameter* p : parameters()) n += p->value.size();
  return n;
}

DetectorModel create_model(const DetectorConfig& config, std::uint64_t seed) {
  config.validate();
  DetectorModel m;
  m.config = config;
  std::mt19937_64 rng(seed);
  std::size_t c = static_cast<std::size_t>(config.backbone.in_channels);
  std::size_t conv_index = 0;
  for (const LayerSpec& l : config.backbone.layers) {
    if (l.kind != LayerSpec::Kind::kConv) continue;
    const auto k = static_cast<std::size_t>(l.kernel);
    const auto out = static_cast<std::size_t>(l.out_channels);
    m.backbone.push_back(make_layer("backbone.conv" + std::to_string(conv_index++),
                                    {out, c, k, k}, he(c * k * k), rng));
    c = out;
  }
  const auto r = static_cast<std::size_t>(config.rpn_channels);
  const std::size_t anchors = config.anchors.per_location();
  m.rpn_conv = make_layer("rpn.conv", {r, c, 3, 3}, he(c * 9), rng);
  m.rpn_cls = make_layer("rpn.cls", {2 * anchors, r, 1, 1}, 0.01, rng);
  m.rpn_reg = make_layer("rpn.reg", {4 * anchors, r, 1, 1}, 0.001, rng);
  const std::size_t flat = c * static_cast<std::size_t>(config.roi.output_h) *
                           static_cast<std::size_t>(config.roi.output_w);
  const auto hidden = static_cast<std::size_t>(config.head_hidden);
  m.head_fc = make_layer("head.fc", {hidden, flat}, he(flat), rng);
  reinit_class_layers(m, seed ^ 0x9e3779b97f4a7c15ull);
  return m;
}

void reinit_class_layers(DetectorModel& model, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto hidden = static_cast<std::size_t>(model.config.head_hidden);
  const std::size_t k = model.config.labels.size();
  model.head_cls = make_layer("head.cls", {k + 1, hidden}, 0.01, rng);
  model.head_reg = make_layer("head.reg", {4 * k, hidden}, 0.001, rng);
}

}  // namespace docdet::detector

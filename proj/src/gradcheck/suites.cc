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

#include "docdet/gradcheck/suites.h"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>

#include "docdet/detector/head.h"
#include "docdet/detector/losses.h"
#include "docdet/detector/model.h"
#include "docdet/detector/roi.h"
#include "docdet/error.h"
#include "docdet/numerics/gradcheck.h"
#include "docdet/numerics/losses.h"
#include "docdet/numerics/ops.h"

namespace docdet::gradcheck {

using numerics::GradCheckResult;
using numerics::ScalarFunction;
using numerics::Shape;
using numerics::Tensor;

namespace {

constexpr double kEpsilon = 1e-3;

Tensor uniform(Shape shape, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<double> u(lo, hi);
  for (double& v : t.values()) v = u(rng);
  return t;
}

double dot(const Tensor& a, const Tensor& b) {
  return std::inner_product(a.values().begin(), a.values().end(), b.values().begin(), 0.0);
}

struct Check {
  std::string label;
  GradCheckResult r;
};

// Keeps the worst of several checks.
SuiteResult summarize(const std::string& name, const std::vector<Check>& checks) {
  SuiteResult s{name, 0.0, "", 0.0};
  for (const Check& c : checks) {
    if (c.r.max_relative_error >= s.max_relative_error) {
      s.max_relative_error = c.r.max_relative_error;
      s.worst = c.label + "[" + std::to_string(c.r.worst_index) + "]";
    }
  }
  return s;
}

SuiteResult conv2d_suite(std::mt19937_64& rng) {
  const numerics::Conv2dParams p{2, 1};
  const Tensor x = uniform({2, 3, 7, 6}, rng);
  const Tensor w = uniform({4, 3, 3, 3}, rng);
  const Tensor b = uniform({4}, rng);
  const Tensor r = uniform(numerics::conv2d(x, w, b, p).shape(), rng);
  auto grads = [&](const Tensor& xx, const Tensor& ww) {
    return numerics::conv2d_backward(xx, ww, r, p);
  };
  return summarize("conv2d", {
      {"input", numerics::finite_diff_check_detailed(
                    {[&](const Tensor& t) { return dot(numerics::conv2d(t, w, b, p), r); },
                     [&](const Tensor& t) { return grads(t, w).input; }},
                    x, kEpsilon)},
      {"weight", numerics::finite_diff_check_detailed(
                     {[&](const Tensor& t) { return dot(numerics::conv2d(x, t, b, p), r); },
                      [&](const Tensor& t) { return grads(x, t).weight; }},
                     w, kEpsilon)},
      {"bias", numerics::finite_diff_check_detailed(
                   {[&](const Tensor& t) { return dot(numerics::conv2d(x, w, t, p), r); },
                    [&](const Tensor&) { return grads(x, w).bias; }},
                   b, kEpsilon)},
  });
}

SuiteResult linear_suite(std::mt19937_64& rng) {
  const Tensor x = uniform({5, 7}, rng);
  const Tensor w = uniform({3, 7}, rng);
  const Tensor b = uniform({3}, rng);
  const Tensor r = uniform({5, 3}, rng);
  return summarize("linear", {
      {"input", numerics::finite_diff_check_detailed(
                    {[&](const Tensor& t) { return dot(numerics::linear(t, w, b), r); },
                     [&](const Tensor& t) { return numerics::linear_backward(t, w, r).input; }},
                    x, kEpsilon)},
      {"weight", numerics::finite_diff_check_detailed(
                     {[&](const Tensor& t) { return dot(numerics::linear(x, t, b), r); },
                      [&](const Tensor& t) { return numerics::linear_backward(x, t, r).weight; }},
                     w, kEpsilon)},
      {"bias", numerics::finite_diff_check_detailed(
                   {[&](const Tensor& t) { return dot(numerics::linear(x, w, t), r); },
                    [&](const Tensor&) { return numerics::linear_backward(x, w, r).bias; }},
                   b, kEpsilon)},
  });
}

SuiteResult max_pool_suite(std::mt19937_64& rng) {
  // A shuffled ramp with spacing far above epsilon: no ties and no argmax
  // flips under perturbation.
  Tensor x({2, 2, 6, 6});
  std::vector<double> v(x.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.1 * static_cast<double>(i);
  std::shuffle(v.begin(), v.end(), rng);
  std::copy(v.begin(), v.end(), x.data());
  const Tensor r = uniform(numerics::max_pool2d(x, 2, 2).output.shape(), rng);
  return summarize("max_pool2d", {
      {"input", numerics::finite_diff_check_detailed(
                    {[&](const Tensor& t) { return dot(numerics::max_pool2d(t, 2, 2).output, r); },
                     [&](const Tensor& t) {
                       return numerics::max_pool2d_backward(t.shape(),
                                                            numerics::max_pool2d(t, 2, 2).argmax, r);
                     }},
                    x, kEpsilon)},
  });
}

SuiteResult bilinear_suite(std::mt19937_64& rng) {
  const Tensor f = uniform({2, 5, 6}, rng);
  std::uniform_real_distribution<double> ux(-0.5, 5.5), uy(-0.5, 4.5);
  struct Sample { double x, y, w; std::size_t c; };
  std::vector<Sample> samples;
  for (int i = 0; i < 12; ++i) samples.push_back({ux(rng), uy(rng), ux(rng) - 2.5, static_cast<std::size_t>(i % 2)});
  ScalarFunction fn{[&](const Tensor& t) {
                      double s = 0.0;
                      for (const Sample& q : samples) s += q.w * numerics::bilinear_sample(t, q.x, q.y, q.c);
                      return s;
                    },
                    [&](const Tensor& t) {
                      Tensor g(t.shape());
                      for (const Sample& q : samples) numerics::bilinear_sample_backward(q.w, q.x, q.y, q.c, g);
                      return g;
                    }};
  return summarize("bilinear_sample", {{"feature", numerics::finite_diff_check_detailed(fn, f, kEpsilon)}});
}

SuiteResult roi_align_suite(std::mt19937_64& rng) {
  const Tensor f = uniform({3, 6, 7}, rng);
  detector::RoiConfig cfg;
  cfg.output_h = 3;
  cfg.output_w = 2;
  cfg.samples_per_bin = 2;
  const geometry::Box roi{0.7, 1.3, 5.9, 5.2};
  const Tensor r = uniform({3, 3, 2}, rng);
  ScalarFunction fn{[&](const Tensor& t) { return dot(detector::roi_align(t, roi, cfg), r); },
                    [&](const Tensor& t) {
                      Tensor g(t.shape());
                      detector::roi_align_backward(r, roi, cfg, g);
                      return g;
                    }};
  return summarize("roi_align", {{"feature", numerics::finite_diff_check_detailed(fn, f, kEpsilon)}});
}

SuiteResult softmax_ce_suite(std::mt19937_64& rng) {
  std::vector<Check> checks;
  for (std::size_t target = 0; target < 4; ++target) {
    const Tensor logits = uniform({4}, rng, -3.0, 3.0);
    ScalarFunction fn{[&](const Tensor& t) { return numerics::softmax_cross_entropy(t, target).loss; },
                      [&](const Tensor& t) { return numerics::softmax_cross_entropy(t, target).grad; }};
    checks.push_back({"target" + std::to_string(target) + ".logit",
                      numerics::finite_diff_check_detailed(fn, logits, kEpsilon)});
  }
  return summarize("softmax_cross_entropy", checks);
}

SuiteResult smooth_l1_suite(std::mt19937_64& rng) {
  // Keep clear of the |x| = 1 seam where the second derivative jumps.
  Tensor x({16});
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double& v : x.values()) {
    do v = u(rng);
    while (std::abs(std::abs(v) - 1.0) < 0.05);
  }
  ScalarFunction fn{[](const Tensor& t) { return numerics::smooth_l1(t).loss; },
                    [](const Tensor& t) { return numerics::smooth_l1(t).grad; }};
  return summarize("smooth_l1", {{"x", numerics::finite_diff_check_detailed(fn, x, kEpsilon)}});
}

// Smallest |pre-activation| over every ReLU in the network for this plan.
double relu_margin(const detector::DetectorModel& model, const detector::ForwardState& state,
                   const detector::TrainingPlan& plan) {
  double m = std::numeric_limits<double>::infinity();
  auto scan = [&m](const Tensor& t) {
    for (double v : t.values()) m = std::min(m, std::abs(v));
  };
  for (const auto& e : state.backbone.layers) scan(e.pre_activation);
  scan(state.rpn_cache.pre_activation);
  std::vector<geometry::Box> boxes;
  for (const detector::RoiSample& r : plan.rois) boxes.push_back(r.box);
  const detector::RoiBatch roi = detector::roi_features(
      state.features, boxes, model.config.backbone.total_stride(), model.config.roi);
  detector::HeadCache hc;
  detector::head_forward(model, roi.output, &hc);
  scan(hc.pre_activation);
  return m;
}

// Total detector loss of the toy model as a function of all parameters,
// with the sampled plan frozen. The loss has ReLU kinks; draws that put a
// pre-activation within reach of a perturbation are rejected, the same way
// the max_pool2d suite avoids ties.
SuiteResult end_to_end_suite(const std::string& name, detector::RoiMode mode, std::mt19937_64& rng) {
  constexpr double kMargin = 1e-3;
  detector::DetectorConfig cfg = detector::DetectorConfig::toy();
  cfg.roi.mode = mode;
  const std::vector<data::Annotation> gts = {{{1.0, 1.0, 6.0, 5.0}, 0}, {{4.5, 3.5, 8.0, 8.0}, 2}};
  detector::DetectorModel model;
  Tensor image;
  detector::TrainingPlan plan;
  for (int attempt = 0;; ++attempt) {
    if (attempt == 100) throw NumericError(name + ": no kink-free draw in 100 attempts");
    model = detector::create_model(cfg, rng());
    // The default output layers start near zero, which leaves the box terms
    // with gradients close to round-off. Redraw them larger, biases too.
    std::normal_distribution<double> big(0.0, 0.3), small(0.0, 0.1);
    for (detector::Layer* l : {&model.rpn_cls, &model.rpn_reg, &model.head_cls, &model.head_reg}) {
      for (double& v : l->weight.value.values()) v = big(rng);
    }
    for (numerics::Parameter* p : model.parameters()) {
      if (p->name.ends_with(".bias")) {
        for (double& v : p->value.values()) v = small(rng);
      }
    }
    image = uniform({1, 3, 8, 8}, rng, 0.0, 1.0);
    const detector::ForwardState state = detector::forward_features(model, image);
    plan = detector::build_plan(model, state, gts, rng);
    if (relu_margin(model, state, plan) > kMargin) break;
  }

  std::vector<numerics::Parameter*> params = model.parameters();
  std::size_t n = 0;
  for (const numerics::Parameter* p : params) n += p->value.size();
  Tensor flat({n});
  {
    std::size_t o = 0;
    for (const numerics::Parameter* p : params)
      for (double v : p->value.values()) flat[o++] = v;
  }
  auto load = [&](const Tensor& t) {
    std::size_t o = 0;
    for (numerics::Parameter* p : params)
      for (double& v : p->value.values()) v = t[o++];
  };
  ScalarFunction fn{[&](const Tensor& t) {
                      load(t);
                      const detector::ForwardState s = detector::forward_features(model, image);
                      return detector::loss_and_backward(model, s, plan, false).total();
                    },
                    [&](const Tensor& t) {
                      load(t);
                      model.zero_grad();
                      const detector::ForwardState s = detector::forward_features(model, image);
                      detector::loss_and_backward(model, s, plan, true);
                      Tensor g({n});
                      std::size_t o = 0;
                      for (const numerics::Parameter* p : params)
                        for (double v : p->grad.values()) g[o++] = v;
                      return g;
                    }};
  // A step of 1e-5 moves no pre-activation by more than the margin.
  const GradCheckResult r = numerics::finite_diff_check_detailed(fn, flat, 1e-5);
  SuiteResult s{name, r.max_relative_error, "", 0.0};
  std::size_t o = 0;
  for (const numerics::Parameter* p : params) {
    if (r.worst_index < o + p->value.size()) {
      s.worst = p->name + "[" + std::to_string(r.worst_index - o) + "]";
      break;
    }
    o += p->value.size();
  }
  return s;
}

using SuiteFn = std::function<SuiteResult(std::mt19937_64&)>;

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"conv2d", conv2d_suite},
      {"linear", linear_suite},
      {"max_pool2d", max_pool_suite},
      {"bilinear_sample", bilinear_suite},
      {"roi_align", roi_align_suite},
      {"softmax_cross_entropy", softmax_ce_suite},
      {"smooth_l1", smooth_l1_suite},
      {"end_to_end_align",
       [](std::mt19937_64& g) { return end_to_end_suite("end_to_end_align", detector::RoiMode::kAlign, g); }},
      {"end_to_end_pool",
       [](std::mt19937_64& g) { return end_to_end_suite("end_to_end_pool", detector::RoiMode::kPool, g); }},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    std::mt19937_64 rng(seed);
    const auto t0 = std::chrono::steady_clock::now();
    SuiteResult r = fn(rng);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  std::string known;
  for (const std::string& n : suite_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown gradcheck suite '" + name + "' (known: " + known + ")");
}

std::vector<SuiteResult> run_all(std::uint64_t seed) {
  std::vector<SuiteResult> out;
  for (const std::string& n : suite_names()) out.push_back(run_suite(n, seed));
  return out;
}

}  // namespace docdet::gradcheck

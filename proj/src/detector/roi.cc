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

#include "docdet/detector/roi.h"

#include <algorithm>
#include <cmath>

#include "docdet/error.h"

namespace docdet::detector {

using numerics::Tensor;

namespace {

void check_features(const Tensor& f) {
  if (f.rank() != 3) {
    throw ShapeError("RoI ops expect features [C, H, W], got " + numerics::shape_to_string(f.shape()));
  }
}

struct Corner {
  std::size_t idx[4];
  double w[4];
};

// Same convention as numerics::bilinear_sample: continuous position p maps
// to grid point p - 0.5, clamped to the map.
Corner corners(double px, double py, std::size_t h, std::size_t w) {
  const double x = std::clamp(px - 0.5, 0.0, static_cast<double>(w - 1));
  const double y = std::clamp(py - 0.5, 0.0, static_cast<double>(h - 1));
  const auto x0 = static_cast<std::size_t>(std::floor(x));
  const auto y0 = static_cast<std::size_t>(std::floor(y));
  const std::size_t x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
  const double fx = x - static_cast<double>(x0), fy = y - static_cast<double>(y0);
  return {{y0 * w + x0, y0 * w + x1, y1 * w + x0, y1 * w + x1},
          {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy}};
}

std::vector<Corner> align_samples(const geometry::Box& roi, const RoiConfig& cfg,
                                  std::size_t h, std::size_t w) {
  if (!(roi.width() > 0.0 && roi.height() > 0.0)) {
    throw ShapeError("roi_align needs a positive-area RoI");
  }
  const int s = cfg.samples_per_bin;
  const double bw = roi.width() / cfg.output_w, bh = roi.height() / cfg.output_h;
  std::vector<Corner> out;
  out.reserve(static_cast<std::size_t>(cfg.output_h * cfg.output_w * s * s));
  for (int oy = 0; oy < cfg.output_h; ++oy)
    for (int ox = 0; ox < cfg.output_w; ++ox)
      for (int sy = 0; sy < s; ++sy)
        for (int sx = 0; sx < s; ++sx) {
          const double px = roi.x_min + bw * (ox + (sx + 0.5) / s);
          const double py = roi.y_min + bh * (oy + (sy + 0.5) / s);
          out.push_back(corners(px, py, h, w));
        }
  return out;
}

}  // namespace

RoiPoolResult roi_pool(const Tensor& features, const geometry::Box& roi, const RoiConfig& cfg) {
  check_features(features);
  cfg.validate();
  if (!roi.valid()) throw ShapeError("roi_pool needs a valid RoI");
  const std::size_t c = features.dim(0), h = features.dim(1), w = features.dim(2);
  const auto oh = static_cast<std::size_t>(cfg.output_h), ow = static_cast<std::size_t>(cfg.output_w);
  const long x0 = std::lround(roi.x_min), y0 = std::lround(roi.y_min);
  const long rw = std::max(std::lround(roi.x_max) - x0, 1L);
  const long rh = std::max(std::lround(roi.y_max) - y0, 1L);
  RoiPoolResult r{Tensor({c, oh, ow}), std::vector<std::size_t>(c * oh * ow)};
  for (std::size_t by = 0; by < oh; ++by) {
    long ys = y0 + static_cast<long>(std::floor(static_cast<double>(by) * rh / oh));
    long ye = y0 + static_cast<long>(std::ceil(static_cast<double>(by + 1) * rh / oh));
    const double cy = 0.5 * (ys + ye);
    ys = std::clamp(ys, 0L, static_cast<long>(h));
    ye = std::clamp(ye, 0L, static_cast<long>(h));
    for (std::size_t bx = 0; bx < ow; ++bx) {
      long xs = x0 + static_cast<long>(std::floor(static_cast<double>(bx) * rw / ow));
      long xe = x0 + static_cast<long>(std::ceil(static_cast<double>(bx + 1) * rw / ow));
      const double cx = 0.5 * (xs + xe);
      xs = std::clamp(xs, 0L, static_cast<long>(w));
      xe = std::clamp(xe, 0L, static_cast<long>(w));
      if (xs >= xe || ys >= ye) {
        // Nearest cell to the bin centre.
        const auto ny = static_cast<std::size_t>(std::clamp(static_cast<long>(std::floor(cy)), 0L, static_cast<long>(h) - 1));
        const auto nx = static_cast<std::size_t>(std::clamp(static_cast<long>(std::floor(cx)), 0L, static_cast<long>(w) - 1));
        xs = static_cast<long>(nx);
        xe = xs + 1;
        ys = static_cast<long>(ny);
        ye = ys + 1;
      }
      for (std::size_t ch = 0; ch < c; ++ch) {
        std::size_t best = (ch * h + static_cast<std::size_t>(ys)) * w + static_cast<std::size_t>(xs);
        for (long y = ys; y < ye; ++y)
          for (long x = xs; x < xe; ++x) {
            const std::size_t i = (ch * h + static_cast<std::size_t>(y)) * w + static_cast<std::size_t>(x);
            if (features[i] > features[best]) best = i;
          }
        const std::size_t o = (ch * oh + by) * ow + bx;
        r.output[o] = features[best];
        r.argmax[o] = best;
      }
    }
  }
  return r;
}

void roi_pool_backward(const Tensor& grad_output, std::span<const std::size_t> argmax,
                       Tensor& feature_grad) {
  if (argmax.size() != grad_output.size()) throw ShapeError("roi_pool_backward: argmax size mismatch");
  for (std::size_t i = 0; i < argmax.size(); ++i) feature_grad[argmax[i]] += grad_output[i];
}

Tensor roi_align(const Tensor& features, const geometry::Box& roi, const RoiConfig& cfg) {
  check_features(features);
  cfg.validate();
  const std::size_t c = features.dim(0), h = features.dim(1), w = features.dim(2);
  const auto oh = static_cast<std::size_t>(cfg.output_h), ow = static_cast<std::size_t>(cfg.output_w);
  const std::vector<Corner> samples = align_samples(roi, cfg, h, w);
  const std::size_t per_bin = static_cast<std::size_t>(cfg.samples_per_bin * cfg.samples_per_bin);
  const double inv = 1.0 / static_cast<double>(per_bin);
  Tensor out({c, oh, ow});
  for (std::size_t ch = 0; ch < c; ++ch) {
    const double* f = features.data() + ch * h * w;
    for (std::size_t b = 0; b < oh * ow; ++b) {
      double acc = 0.0;
      for (std::size_t s = 0; s < per_bin; ++s) {
        const Corner& k = samples[b * per_bin + s];
        acc += k.w[0] * f[k.idx[0]] + k.w[1] * f[k.idx[1]] + k.w[2] * f[k.idx[2]] + k.w[3] * f[k.idx[3]];
      }
      out[ch * oh * ow + b] = acc * inv;
    }
  }
  return out;
}

void roi_align_backward(const Tensor& grad_output, const geometry::Box& roi,
                        const RoiConfig& cfg, Tensor& feature_grad) {
  check_features(feature_grad);
  const std::size_t c = feature_grad.dim(0), h = feature_grad.dim(1), w = feature_grad.dim(2);
  const auto oh = static_cast<std::size_t>(cfg.output_h), ow = static_cast<std::size_t>(cfg.output_w);
  if (grad_output.size() != c * oh * ow) throw ShapeError("roi_align_backward: gradient shape mismatch");
  const std::vector<Corner> samples = align_samples(roi, cfg, h, w);
  const std::size_t per_bin = static_cast<std::size_t>(cfg.samples_per_bin * cfg.samples_per_bin);
  const double inv = 1.0 / static_cast<double>(per_bin);
  for (std::size_t ch = 0; ch < c; ++ch) {
    double* g = feature_grad.data() + ch * h * w;
    for (std::size_t b = 0; b < oh * ow; ++b) {
      const double go = grad_output[ch * oh * ow + b] * inv;
      for (std::size_t s = 0; s < per_bin; ++s) {
        const Corner& k = samples[b * per_bin + s];
        for (int q = 0; q < 4; ++q) g[k.idx[q]] += go * k.w[q];
      }
    }
  }
}

namespace {

Tensor view_chw(const Tensor& features) {
  if (features.rank() != 4 || features.dim(0) != 1) {
    throw ShapeError("RoI extraction expects features [1, C, H, W], got " +
                     numerics::shape_to_string(features.shape()));
  }
  return features.reshaped({features.dim(1), features.dim(2), features.dim(3)});
}

geometry::Box to_feature(const geometry::Box& b, double stride) {
  return geometry::scale_box(b, 1.0 / stride, 1.0 / stride);
}

}  // namespace

RoiBatch roi_features(const Tensor& features, std::span<const geometry::Box> rois, double stride,
                      const RoiConfig& cfg) {
  const Tensor f = view_chw(features);
  const std::size_t c = f.dim(0);
  const auto oh = static_cast<std::size_t>(cfg.output_h), ow = static_cast<std::size_t>(cfg.output_w);
  RoiBatch out;
  out.output = Tensor({std::max<std::size_t>(rois.size(), 1), c, oh, ow});
  if (rois.empty()) {
    out.output = Tensor();
    return out;
  }
  const std::size_t per = c * oh * ow;
  for (std::size_t r = 0; r < rois.size(); ++r) {
    const geometry::Box b = to_feature(rois[r], stride);
    if (cfg.mode == RoiMode::kAlign) {
      const Tensor t = roi_align(f, b, cfg);
      std::copy(t.data(), t.data() + per, out.output.data() + r * per);
    } else {
      RoiPoolResult t = roi_pool(f, b, cfg);
      std::copy(t.output.data(), t.output.data() + per, out.output.data() + r * per);
      out.argmax.push_back(std::move(t.argmax));
    }
  }
  return out;
}

Tensor roi_features_backward(const Tensor& features, std::span<const geometry::Box> rois,
                             double stride, const RoiConfig& cfg, const RoiBatch& forward,
                             const Tensor& grad_output) {
  Tensor g({features.dim(1), features.dim(2), features.dim(3)});
  const auto oh = static_cast<std::size_t>(cfg.output_h), ow = static_cast<std::size_t>(cfg.output_w);
  const std::size_t per = features.dim(1) * oh * ow;
  for (std::size_t r = 0; r < rois.size(); ++r) {
    Tensor go({features.dim(1), oh, ow},
              std::vector<double>(grad_output.data() + r * per, grad_output.data() + (r + 1) * per));
    if (cfg.mode == RoiMode::kAlign) {
      roi_align_backward(go, to_feature(rois[r], stride), cfg, g);
    } else {
      roi_pool_backward(go, forward.argmax[r], g);
    }
  }
  g.reshape(features.shape());
  return g;
}

}  // namespace docdet::detector

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

#include "docdet/numerics/ops.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "docdet/error.h"
#include "docdet/numerics/kernels.h"

namespace docdet::numerics {
namespace {

void require_rank(const Tensor& t, std::size_t rank, const char* op,
                  const char* what) {
  if (t.rank() != rank) {
    throw ShapeError(std::string(op) + ": " + what + " must have rank " +
                     std::to_string(rank) + ", got " + shape_to_string(t.shape()));
  }
}

struct ConvGeometry {
  std::size_t n, c, h, w;
  std::size_t out_c, kh, kw;
  std::size_t oh, ow;
  int stride, pad;

  std::size_t col_rows() const { return c * kh * kw; }
  std::size_t col_cols() const { return oh * ow; }
  bool is_pointwise() const {
    return kh == 1 && kw == 1 && stride == 1 && pad == 0;
  }
};

ConvGeometry conv_geometry(const Tensor& input, const Tensor& weight,
                           Conv2dParams p) {
  require_rank(input, 4, "conv2d", "input");
  require_rank(weight, 4, "conv2d", "weight");
  if (p.stride < 1) throw ShapeError("conv2d: stride must be >= 1");
  if (p.padding < 0) throw ShapeError("conv2d: padding must be >= 0");
  ConvGeometry g{};
  g.n = input.dim(0);
  g.c = input.dim(1);
  g.h = input.dim(2);
  g.w = input.dim(3);
  g.out_c = weight.dim(0);
  g.kh = weight.dim(2);
  g.kw = weight.dim(3);
  g.stride = p.stride;
  g.pad = p.padding;
  if (weight.dim(1) != g.c) {
    throw ShapeError("conv2d: input channels " + std::to_string(g.c) +
                     " != weight in-channels (dim 1) " +
                     std::to_string(weight.dim(1)));
  }
  if (g.h + 2 * static_cast<std::size_t>(p.padding) < g.kh) {
    throw ShapeError("conv2d: kernel height " + std::to_string(g.kh) +
                     " exceeds padded input height");
  }
  if (g.w + 2 * static_cast<std::size_t>(p.padding) < g.kw) {
    throw ShapeError("conv2d: kernel width " + std::to_string(g.kw) +
                     " exceeds padded input width");
  }
  g.oh = conv_output_size(g.h, g.kh, p.stride, p.padding);
  g.ow = conv_output_size(g.w, g.kw, p.stride, p.padding);
  return g;
}

// Output columns oj whose input column oj * stride - pad + kj lies inside
// [0, w): returns [lo, hi).
std::pair<std::size_t, std::size_t> valid_columns(const ConvGeometry& g,
                                                  std::size_t kj) {
  const long s = g.stride;
  const long off = static_cast<long>(kj) - g.pad;
  long lo = off >= 0 ? 0 : (-off + s - 1) / s;
  long hi = (static_cast<long>(g.w) - 1 - off) / s + 1;
  if (static_cast<long>(g.w) - 1 - off < 0) hi = 0;
  lo = std::min<long>(lo, static_cast<long>(g.ow));
  hi = std::clamp<long>(hi, lo, static_cast<long>(g.ow));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

void im2col(const double* image, const ConvGeometry& g, double* col) {
  const std::size_t cols = g.col_cols();
  const std::size_t s = static_cast<std::size_t>(g.stride);
  for (std::size_t c = 0; c < g.c; ++c) {
    const double* plane = image + c * g.h * g.w;
    for (std::size_t ki = 0; ki < g.kh; ++ki) {
      for (std::size_t kj = 0; kj < g.kw; ++kj) {
        double* row = col + ((c * g.kh + ki) * g.kw + kj) * cols;
        const auto [lo, hi] = valid_columns(g, kj);
        for (std::size_t oi = 0; oi < g.oh; ++oi) {
          const long ii = static_cast<long>(oi) * g.stride - g.pad + static_cast<long>(ki);
          double* out = row + oi * g.ow;
          if (ii < 0 || ii >= static_cast<long>(g.h)) {
            std::fill(out, out + g.ow, 0.0);
            continue;
          }
          std::fill(out, out + lo, 0.0);
          std::fill(out + hi, out + g.ow, 0.0);
          // Column index lo * s + kj - pad is >= 0 by construction.
          const double* src = plane + static_cast<std::size_t>(ii) * g.w +
                              (lo * s + kj) - static_cast<std::size_t>(g.pad);
          if (s == 1) {
            std::copy(src, src + (hi - lo), out + lo);
          } else {
            for (std::size_t oj = lo; oj < hi; ++oj, src += s) out[oj] = *src;
          }
        }
      }
    }
  }
}

void col2im_add(const double* col, const ConvGeometry& g, double* image) {
  const std::size_t cols = g.col_cols();
  const std::size_t s = static_cast<std::size_t>(g.stride);
  for (std::size_t c = 0; c < g.c; ++c) {
    double* plane = image + c * g.h * g.w;
    for (std::size_t ki = 0; ki < g.kh; ++ki) {
      for (std::size_t kj = 0; kj < g.kw; ++kj) {
        const double* row = col + ((c * g.kh + ki) * g.kw + kj) * cols;
        const auto [lo, hi] = valid_columns(g, kj);
        for (std::size_t oi = 0; oi < g.oh; ++oi) {
          const long ii = static_cast<long>(oi) * g.stride - g.pad + static_cast<long>(ki);
          if (ii < 0 || ii >= static_cast<long>(g.h)) continue;
          double* dst = plane + static_cast<std::size_t>(ii) * g.w +
                        (lo * s + kj) - static_cast<std::size_t>(g.pad);
          const double* src = row + oi * g.ow;
          for (std::size_t oj = lo; oj < hi; ++oj, dst += s) *dst += src[oj];
        }
      }
    }
  }
}

}  // namespace

std::size_t conv_output_size(std::size_t in, std::size_t kernel, int stride,
                             int padding) {
  const std::size_t padded = in + 2 * static_cast<std::size_t>(padding);
  if (padded < kernel || stride < 1) return 0;
  return (padded - kernel) / static_cast<std::size_t>(stride) + 1;
}

Tensor conv2d(const Tensor& input, const Tensor& weight, const Tensor& bias,
              Conv2dParams p) {
  const ConvGeometry g = conv_geometry(input, weight, p);
  if (bias.size() != g.out_c) {
    throw ShapeError("conv2d: bias length " + std::to_string(bias.size()) +
                     " != output channels (weight dim 0) " +
                     std::to_string(g.out_c));
  }
  Tensor out({g.n, g.out_c, g.oh, g.ow});
  const std::size_t rows = g.col_rows();
  const std::size_t cols = g.col_cols();
  std::vector<double> col;
  if (!g.is_pointwise()) col.resize(rows * cols);
  for (std::size_t n = 0; n < g.n; ++n) {
    const double* image = input.data() + n * g.c * g.h * g.w;
    const double* b = image;
    if (!g.is_pointwise()) {
      im2col(image, g, col.data());
      b = col.data();
    }
    double* y = out.data() + n * g.out_c * cols;
    for (std::size_t o = 0; o < g.out_c; ++o) {
      std::fill(y + o * cols, y + (o + 1) * cols, bias[o]);
    }
    kernels::gemm({g.out_c, cols, rows, weight.data(), rows, 1, b, cols, y, cols});
  }
  check_finite(out, "conv2d");
  return out;
}

Conv2dGrads conv2d_backward(const Tensor& input, const Tensor& weight,
                            const Tensor& grad_output, Conv2dParams p,
                            bool need_input_grad) {
  const ConvGeometry g = conv_geometry(input, weight, p);
  const Shape expected{g.n, g.out_c, g.oh, g.ow};
  if (grad_output.shape() != expected) {
    throw ShapeError("conv2d_backward: grad_output " +
                     shape_to_string(grad_output.shape()) + " != " +
                     shape_to_string(expected));
  }
  Conv2dGrads grads{need_input_grad ? Tensor(input.shape()) : Tensor(),
                    Tensor(weight.shape()), Tensor({g.out_c})};
  const std::size_t rows = g.col_rows();
  const std::size_t cols = g.col_cols();
  std::vector<double> col;
  std::vector<double> grad_col(need_input_grad ? rows * cols : 0);
  if (!g.is_pointwise()) col.resize(rows * cols);
  for (std::size_t n = 0; n < g.n; ++n) {
    const double* image = input.data() + n * g.c * g.h * g.w;
    const double* gy = grad_output.data() + n * g.out_c * cols;
    const double* b = image;
    if (!g.is_pointwise()) {
      im2col(image, g, col.data());
      b = col.data();
    }
    for (std::size_t o = 0; o < g.out_c; ++o) {
      double s = 0.0;
      for (std::size_t q = 0; q < cols; ++q) s += gy[o * cols + q];
      grads.bias[o] += s;
    }
    kernels::gemm_abt({g.out_c, rows, cols, gy, cols, b, cols,
                       grads.weight.data(), rows});
    if (!need_input_grad) continue;
    std::fill(grad_col.begin(), grad_col.end(), 0.0);
    kernels::gemm({rows, cols, g.out_c, weight.data(), 1, rows, gy, cols,
                   grad_col.data(), cols});
    double* gx = grads.input.data() + n * g.c * g.h * g.w;
    if (g.is_pointwise()) {
      for (std::size_t q = 0; q < rows * cols; ++q) gx[q] += grad_col[q];
    } else {
      col2im_add(grad_col.data(), g, gx);
    }
  }
  return grads;
}

Tensor relu(const Tensor& x) {
  Tensor out = x;
  for (double& v : out.values()) v = v > 0.0 ? v : 0.0;
  return out;
}

Tensor relu_backward(const Tensor& x, const Tensor& grad_output) {
  if (x.shape() != grad_output.shape()) {
    throw ShapeError("relu_backward: shape mismatch");
  }
  Tensor g(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) {
    g[i] = x[i] > 0.0 ? grad_output[i] : 0.0;
  }
  return g;
}

MaxPoolResult max_pool2d(const Tensor& input, int window, int stride) {
  require_rank(input, 4, "max_pool2d", "input");
  if (window < 1 || stride < 1) {
    throw ShapeError("max_pool2d: window and stride must be >= 1");
  }
  const std::size_t n = input.dim(0), c = input.dim(1), h = input.dim(2),
                    w = input.dim(3);
  const auto win = static_cast<std::size_t>(window);
  if (win > h || win > w) {
    throw ShapeError("max_pool2d: window " + std::to_string(window) +
                     " exceeds spatial dims " + shape_to_string(input.shape()));
  }
  const std::size_t oh = conv_output_size(h, win, stride, 0);
  const std::size_t ow = conv_output_size(w, win, stride, 0);
  MaxPoolResult r{Tensor({n, c, oh, ow}), {}};
  r.argmax.resize(r.output.size());
  std::size_t out_idx = 0;
  for (std::size_t plane = 0; plane < n * c; ++plane) {
    const std::size_t base = plane * h * w;
    for (std::size_t oi = 0; oi < oh; ++oi) {
      for (std::size_t oj = 0; oj < ow; ++oj, ++out_idx) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_idx = base + oi * stride * w + oj * stride;
        for (std::size_t ki = 0; ki < win; ++ki) {
          const std::size_t row = base + (oi * stride + ki) * w + oj * stride;
          for (std::size_t kj = 0; kj < win; ++kj) {
            if (input[row + kj] > best) {
              best = input[row + kj];
              best_idx = row + kj;
            }
          }
        }
        r.output[out_idx] = best;
        r.argmax[out_idx] = best_idx;
      }
    }
  }
  return r;
}

Tensor max_pool2d_backward(const Shape& input_shape,
                           const std::vector<std::size_t>& argmax,
                           const Tensor& grad_output) {
  if (argmax.size() != grad_output.size()) {
    throw ShapeError("max_pool2d_backward: argmax/grad length mismatch");
  }
  Tensor g(input_shape);
  for (std::size_t i = 0; i < argmax.size(); ++i) g[argmax[i]] += grad_output[i];
  return g;
}

namespace {

struct BilinearTaps {
  std::size_t x0, x1, y0, y1;
  double wx, wy;  // weights of x1, y1
};

BilinearTaps bilinear_taps(std::size_t h, std::size_t w, double x, double y) {
  const double cx = std::clamp(x, 0.0, static_cast<double>(w - 1));
  const double cy = std::clamp(y, 0.0, static_cast<double>(h - 1));
  BilinearTaps t{};
  t.x0 = static_cast<std::size_t>(std::floor(cx));
  t.y0 = static_cast<std::size_t>(std::floor(cy));
  t.x1 = std::min(t.x0 + 1, w - 1);
  t.y1 = std::min(t.y0 + 1, h - 1);
  t.wx = cx - static_cast<double>(t.x0);
  t.wy = cy - static_cast<double>(t.y0);
  return t;
}

}  // namespace

double bilinear_sample(const Tensor& feature, double x, double y,
                       std::size_t channel) {
  require_rank(feature, 3, "bilinear_sample", "feature");
  const std::size_t h = feature.dim(1), w = feature.dim(2);
  if (channel >= feature.dim(0)) throw ShapeError("bilinear_sample: bad channel");
  const BilinearTaps t = bilinear_taps(h, w, x, y);
  const double* p = feature.data() + channel * h * w;
  const double top = (1.0 - t.wx) * p[t.y0 * w + t.x0] + t.wx * p[t.y0 * w + t.x1];
  const double bottom = (1.0 - t.wx) * p[t.y1 * w + t.x0] + t.wx * p[t.y1 * w + t.x1];
  return (1.0 - t.wy) * top + t.wy * bottom;
}

void bilinear_sample_backward(double grad, double x, double y,
                              std::size_t channel, Tensor& feature_grad) {
  require_rank(feature_grad, 3, "bilinear_sample_backward", "feature_grad");
  const std::size_t h = feature_grad.dim(1), w = feature_grad.dim(2);
  const BilinearTaps t = bilinear_taps(h, w, x, y);
  double* p = feature_grad.data() + channel * h * w;
  p[t.y0 * w + t.x0] += grad * (1.0 - t.wy) * (1.0 - t.wx);
  p[t.y0 * w + t.x1] += grad * (1.0 - t.wy) * t.wx;
  p[t.y1 * w + t.x0] += grad * t.wy * (1.0 - t.wx);
  p[t.y1 * w + t.x1] += grad * t.wy * t.wx;
}

Tensor linear(const Tensor& input, const Tensor& weight, const Tensor& bias) {
  require_rank(input, 2, "linear", "input");
  require_rank(weight, 2, "linear", "weight");
  const std::size_t n = input.dim(0), in = input.dim(1), out = weight.dim(0);
  if (weight.dim(1) != in) {
    throw ShapeError("linear: input features " + std::to_string(in) +
                     " != weight dim 1 " + std::to_string(weight.dim(1)));
  }
  if (bias.size() != out) {
    throw ShapeError("linear: bias length " + std::to_string(bias.size()) +
                     " != weight dim 0 " + std::to_string(out));
  }
  Tensor y({n, out});
  for (std::size_t r = 0; r < n; ++r) {
    std::copy(bias.data(), bias.data() + out, y.data() + r * out);
  }
  kernels::gemm_abt({n, out, in, input.data(), in, weight.data(), in, y.data(), out});
  check_finite(y, "linear");
  return y;
}

LinearGrads linear_backward(const Tensor& input, const Tensor& weight,
                            const Tensor& grad_output) {
  const std::size_t n = input.dim(0), in = input.dim(1), out = weight.dim(0);
  if (grad_output.shape() != Shape{n, out}) {
    throw ShapeError("linear_backward: grad_output " +
                     shape_to_string(grad_output.shape()));
  }
  LinearGrads g{Tensor(input.shape()), Tensor(weight.shape()), Tensor({out})};
  kernels::gemm({out, in, n, grad_output.data(), 1, out, input.data(), in,
                 g.weight.data(), in});
  kernels::gemm({n, in, out, grad_output.data(), out, 1, weight.data(), in,
                 g.input.data(), in});
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t o = 0; o < out; ++o) g.bias[o] += grad_output.at(r, o);
  }
  return g;
}

Tensor pad_circular(const Tensor& input, int pad) {
  require_rank(input, 4, "pad_circular", "input");
  if (pad < 0) throw ShapeError("pad_circular: negative pad");
  const std::size_t n = input.dim(0), c = input.dim(1), h = input.dim(2),
                    w = input.dim(3);
  const auto p = static_cast<std::size_t>(pad);
  Tensor out({n, c, h + 2 * p, w + 2 * p});
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < c; ++b) {
      for (std::size_t i = 0; i < h + 2 * p; ++i) {
        const std::size_t si = (i + h * (p / h + 1) - p) % h;
        for (std::size_t j = 0; j < w + 2 * p; ++j) {
          const std::size_t sj = (j + w * (p / w + 1) - p) % w;
          out.at(a, b, i, j) = input.at(a, b, si, sj);
        }
      }
    }
  }
  return out;
}

}  // namespace docdet::numerics

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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "docdet/error.h"
#include "docdet/numerics/gradcheck.h"
#include "docdet/numerics/losses.h"
#include "docdet/numerics/ops.h"
#include "docdet/numerics/optim.h"
#include "test_util.h"

namespace docdet::numerics {
namespace {

double weighted_sum(const Tensor& t, const Tensor& w) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t[i] * w[i];
  return s;
}

TEST(Conv2dTest, PointwiseIdentity) {
  std::mt19937_64 rng(1);
  const Tensor x = testing::random_tensor({1, 1, 4, 5}, rng);
  const Tensor y = conv2d(x, Tensor({1, 1, 1, 1}, 1.0), Tensor({1}, 0.0), {1, 0});
  EXPECT_EQ(y, x);
}

TEST(Conv2dTest, AllOnesKernel) {
  const Tensor y = conv2d(Tensor({1, 1, 3, 3}, 1.0), Tensor({1, 1, 3, 3}, 1.0),
                          Tensor({1}, 0.0), {1, 0});
  ASSERT_EQ(y.shape(), (Shape{1, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(y[0], 9.0);
}

TEST(Conv2dTest, ShapeMismatchNamesDimension) {
  try {
    conv2d(Tensor({1, 2, 5, 5}), Tensor({4, 3, 3, 3}), Tensor({4}), {1, 0});
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("channels"), std::string::npos);
  }
  EXPECT_THROW(conv2d(Tensor({1, 1, 2, 2}), Tensor({1, 1, 3, 3}), Tensor({1}), {1, 0}),
               ShapeError);
  EXPECT_THROW(conv2d(Tensor({1, 1, 5, 5}), Tensor({2, 1, 3, 3}), Tensor({3}), {1, 0}),
               ShapeError);
}

TEST(Conv2dTest, OutputShapeProperty) {
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> size(1, 12), k(1, 4), s(1, 3), pad(0, 2),
      ch(1, 3);
  for (int t = 0; t < 300; ++t) {
    const int h = size(rng), w = size(rng), kh = k(rng), kw = k(rng),
              stride = s(rng), p = pad(rng);
    if (h + 2 * p < kh || w + 2 * p < kw) continue;
    const auto cin = static_cast<std::size_t>(ch(rng));
    const auto cout = static_cast<std::size_t>(ch(rng));
    const Tensor y = conv2d(Tensor({1, cin, std::size_t(h), std::size_t(w)}, 0.5),
                            Tensor({cout, cin, std::size_t(kh), std::size_t(kw)}, 0.1),
                            Tensor({cout}), {stride, p});
    EXPECT_EQ(y.dim(1), cout);
    EXPECT_EQ(y.dim(2), static_cast<std::size_t>((h + 2 * p - kh) / stride + 1));
    EXPECT_EQ(y.dim(3), static_cast<std::size_t>((w + 2 * p - kw) / stride + 1));
  }
}

Tensor direct_conv(const Tensor& x, const Tensor& w, const Tensor& b,
                   int stride, int pad) {
  const int h = int(x.dim(2)), wd = int(x.dim(3));
  const int kh = int(w.dim(2)), kw = int(w.dim(3));
  const std::size_t oh = std::size_t((h + 2 * pad - kh) / stride + 1);
  const std::size_t ow = std::size_t((wd + 2 * pad - kw) / stride + 1);
  Tensor y({x.dim(0), w.dim(0), oh, ow});
  for (std::size_t n = 0; n < x.dim(0); ++n) {
    for (std::size_t o = 0; o < w.dim(0); ++o) {
      for (std::size_t i = 0; i < oh; ++i) {
        for (std::size_t j = 0; j < ow; ++j) {
          double acc = b[o];
          for (std::size_t c = 0; c < x.dim(1); ++c) {
            for (int ki = 0; ki < kh; ++ki) {
              for (int kj = 0; kj < kw; ++kj) {
                const int ii = int(i) * stride - pad + ki;
                const int jj = int(j) * stride - pad + kj;
                if (ii < 0 || jj < 0 || ii >= h || jj >= wd) continue;
                acc += w.at(o, c, ki, kj) * x.at(n, c, ii, jj);
              }
            }
          }
          y.at(n, o, i, j) = acc;
        }
      }
    }
  }
  return y;
}

TEST(Conv2dTest, MatchesDirectLoopOracle) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> size(1, 10), k(1, 5), s(1, 4), pad(0, 3);
  int checked = 0;
  while (checked < 150) {
    const int h = size(rng), w = size(rng), kh = k(rng), kw = k(rng),
              stride = s(rng), p = pad(rng);
    if (h + 2 * p < kh || w + 2 * p < kw) continue;
    ++checked;
    const Tensor x = testing::random_tensor({2, 2, std::size_t(h), std::size_t(w)}, rng);
    const Tensor wt = testing::random_tensor({3, 2, std::size_t(kh), std::size_t(kw)}, rng);
    const Tensor b = testing::random_tensor({3}, rng);
    const Tensor y = conv2d(x, wt, b, {stride, p});
    const Tensor expected = direct_conv(x, wt, b, stride, p);
    ASSERT_EQ(y.shape(), expected.shape());
    for (std::size_t i = 0; i < y.size(); ++i) ASSERT_NEAR(y[i], expected[i], 1e-12);

    // Adjoint identity <conv(x), r> - bias term == <x, backward(r).input>
    // exercises col2im on the same geometry.
    const Tensor r = testing::random_tensor(y.shape(), rng);
    const Tensor gx = conv2d_backward(x, wt, r, {stride, p}).input;
    const Tensor y0 = conv2d(x, wt, Tensor({3}), {stride, p});
    EXPECT_NEAR(weighted_sum(y0, r), weighted_sum(x, gx), 1e-10);
  }
}

TEST(Conv2dTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(4);
  const Tensor x = testing::random_tensor({1, 2, 5, 5}, rng);
  const Tensor w = testing::random_tensor({3, 2, 3, 3}, rng);
  const Tensor b = testing::random_tensor({3}, rng);
  const Conv2dParams p{1, 1};
  const Tensor r = testing::random_tensor({1, 3, 5, 5}, rng);

  ScalarFunction wrt_input{
      [&](const Tensor& v) { return weighted_sum(conv2d(v, w, b, p), r); },
      [&](const Tensor& v) { return conv2d_backward(v, w, r, p).input; }};
  ScalarFunction wrt_weight{
      [&](const Tensor& v) { return weighted_sum(conv2d(x, v, b, p), r); },
      [&](const Tensor& v) { return conv2d_backward(x, v, r, p).weight; }};
  ScalarFunction wrt_bias{
      [&](const Tensor& v) { return weighted_sum(conv2d(x, w, v, p), r); },
      [&](const Tensor&) { return conv2d_backward(x, w, r, p).bias; }};
  EXPECT_LE(finite_diff_check(wrt_input, x, 1e-3), 1e-3);
  EXPECT_LE(finite_diff_check(wrt_weight, w, 1e-3), 1e-3);
  EXPECT_LE(finite_diff_check(wrt_bias, b, 1e-3), 1e-3);
}

TEST(Conv2dTest, StridedGradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(5);
  const Tensor x = testing::random_tensor({2, 3, 9, 8}, rng);
  const Tensor w = testing::random_tensor({2, 3, 4, 4}, rng);
  const Tensor b = testing::random_tensor({2}, rng);
  const Conv2dParams p{4, 0};
  const Tensor r = testing::random_tensor(conv2d(x, w, b, p).shape(), rng);
  ScalarFunction f{
      [&](const Tensor& v) { return weighted_sum(conv2d(v, w, b, p), r); },
      [&](const Tensor& v) { return conv2d_backward(v, w, r, p).input; }};
  EXPECT_LE(finite_diff_check(f, x, 1e-3), 1e-3);
}

TEST(ReluTest, ForwardAndBackward) {
  const Tensor y = relu(Tensor({3}, {-1.0, 0.0, 2.0}));
  EXPECT_EQ(y, Tensor({3}, {0.0, 0.0, 2.0}));

  std::mt19937_64 rng(6);
  Tensor x = testing::random_tensor({40}, rng);
  for (double& v : x.values()) {
    if (std::abs(v) < 0.01) v = 0.5;  // keep away from the kink
  }
  const Tensor r = testing::random_tensor({40}, rng);
  ScalarFunction f{[&](const Tensor& v) { return weighted_sum(relu(v), r); },
                   [&](const Tensor& v) { return relu_backward(v, r); }};
  EXPECT_LE(finite_diff_check(f, x, 1e-3), 1e-6);
}

TEST(MaxPoolTest, ForwardPicksMaximum) {
  const auto r = max_pool2d(Tensor({1, 1, 2, 2}, {1, 2, 3, 4}), 2, 2);
  ASSERT_EQ(r.output.size(), 1u);
  EXPECT_EQ(r.output[0], 4.0);
  EXPECT_EQ(r.argmax[0], 3u);
  EXPECT_THROW(max_pool2d(Tensor({1, 1, 2, 2}), 3, 1), ShapeError);
}

TEST(MaxPoolTest, BackwardRoutesToArgmaxOnly) {
  std::mt19937_64 rng(7);
  // Distinct values spaced well beyond epsilon: no ties, no argmax flips.
  Tensor x({1, 2, 6, 6});
  std::vector<double> levels(x.size());
  for (std::size_t i = 0; i < levels.size(); ++i) levels[i] = 0.1 * double(i);
  std::shuffle(levels.begin(), levels.end(), rng);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = levels[i];
  const auto fwd = max_pool2d(x, 2, 2);
  const Tensor r = testing::random_tensor(fwd.output.shape(), rng);
  ScalarFunction f{
      [&](const Tensor& v) { return weighted_sum(max_pool2d(v, 2, 2).output, r); },
      [&](const Tensor& v) {
        const auto p = max_pool2d(v, 2, 2);
        return max_pool2d_backward(v.shape(), p.argmax, r);
      }};
  EXPECT_LE(finite_diff_check(f, x, 1e-3), 1e-6);
  const Tensor g = max_pool2d_backward(x.shape(), fwd.argmax, r);
  std::size_t nonzero = 0;
  for (double v : g.values()) nonzero += v != 0.0;
  EXPECT_EQ(nonzero, fwd.output.size());
}

// Direct four-corner formula: sum over neighbouring cells of
// value * (1 - |x - xc|) * (1 - |y - yc|).
double four_corner_oracle(const Tensor& f, double x, double y, std::size_t c) {
  const std::size_t h = f.dim(1), w = f.dim(2);
  x = std::clamp(x, 0.0, double(w - 1));
  y = std::clamp(y, 0.0, double(h - 1));
  double acc = 0.0;
  for (std::size_t i = 0; i < h; ++i) {
    for (std::size_t j = 0; j < w; ++j) {
      const double wx = 1.0 - std::abs(x - double(j));
      const double wy = 1.0 - std::abs(y - double(i));
      if (wx > 0.0 && wy > 0.0) acc += f.at(c, i, j) * wx * wy;
    }
  }
  return acc;
}

TEST(BilinearTest, GridPointsAndMidpoints) {
  const Tensor f({1, 2, 3}, {2, 4, 6, 8, 10, 12});
  EXPECT_EQ(bilinear_sample(f, 1.0, 1.0, 0), 10.0);
  EXPECT_EQ(bilinear_sample(f, 0.5, 0.0, 0), 3.0);
  EXPECT_EQ(bilinear_sample(f, 2.0, 1.0, 0), 12.0);
  EXPECT_EQ(bilinear_sample(f, 7.0, -3.0, 0), 6.0);  // clamped to the corner
}

TEST(BilinearTest, MatchesFourCornerOracle) {
  std::mt19937_64 rng(8);
  const Tensor f = testing::random_tensor({2, 5, 7}, rng);
  std::uniform_real_distribution<double> ux(-1.0, 7.0), uy(-1.0, 5.0);
  for (int t = 0; t < 100; ++t) {
    const double x = ux(rng), y = uy(rng);
    for (std::size_t c = 0; c < 2; ++c) {
      EXPECT_NEAR(bilinear_sample(f, x, y, c), four_corner_oracle(f, x, y, c), 1e-12);
    }
  }
}

TEST(BilinearTest, BackwardMatchesFiniteDifferences) {
  std::mt19937_64 rng(9);
  const Tensor f = testing::random_tensor({1, 4, 4}, rng);
  const std::vector<std::pair<double, double>> points{{0.3, 1.7}, {2.5, 2.5}, {3.0, 0.2}};
  ScalarFunction fn{
      [&](const Tensor& v) {
        double s = 0.0;
        for (auto [x, y] : points) s += bilinear_sample(v, x, y, 0);
        return s;
      },
      [&](const Tensor& v) {
        Tensor g(v.shape());
        for (auto [x, y] : points) bilinear_sample_backward(1.0, x, y, 0, g);
        return g;
      }};
  EXPECT_LE(finite_diff_check(fn, f, 1e-3), 1e-6);
}

TEST(LinearTest, IdentityAndHandExample) {
  const Tensor x({1, 2}, {1.0, 2.0});
  EXPECT_EQ(linear(x, Tensor({2, 2}, {1, 0, 0, 1}), Tensor({2})), x);
  const Tensor y = linear(x, Tensor({3, 2}, {1, 0, 0, 1, 1, 1}), Tensor({3}));
  EXPECT_EQ(y, Tensor({1, 3}, {1.0, 2.0, 3.0}));
  EXPECT_THROW(linear(x, Tensor({3, 3}), Tensor({3})), ShapeError);
  EXPECT_THROW(linear(x, Tensor({3, 2}), Tensor({2})), ShapeError);
}

TEST(LinearTest, GradientsMatchFiniteDifferences) {
  std::mt19937_64 rng(10);
  const Tensor x = testing::random_tensor({3, 5}, rng);
  const Tensor w = testing::random_tensor({4, 5}, rng);
  const Tensor b = testing::random_tensor({4}, rng);
  const Tensor r = testing::random_tensor({3, 4}, rng);
  ScalarFunction wrt_x{[&](const Tensor& v) { return weighted_sum(linear(v, w, b), r); },
                       [&](const Tensor& v) { return linear_backward(v, w, r).input; }};
  ScalarFunction wrt_w{[&](const Tensor& v) { return weighted_sum(linear(x, v, b), r); },
                       [&](const Tensor& v) { return linear_backward(x, v, r).weight; }};
  ScalarFunction wrt_b{[&](const Tensor& v) { return weighted_sum(linear(x, w, v), r); },
                       [&](const Tensor&) { return linear_backward(x, w, r).bias; }};
  // Linear in each argument: central differences are exact up to round-off.
  EXPECT_LE(finite_diff_check(wrt_x, x, 1e-3), 1e-6);
  EXPECT_LE(finite_diff_check(wrt_w, w, 1e-3), 1e-6);
  EXPECT_LE(finite_diff_check(wrt_b, b, 1e-3), 1e-6);
}

TEST(SoftmaxCrossEntropyTest, KnownValues) {
  EXPECT_NEAR(softmax_cross_entropy(Tensor({3}, 0.0), 1).loss, std::log(3.0), 1e-12);
  EXPECT_NEAR(softmax_cross_entropy(Tensor({3}, {0.0, 1000.0, 0.0}), 1).loss, 0.0, 1e-12);
  EXPECT_THROW(softmax_cross_entropy(Tensor({3}), 3), ShapeError);
}

TEST(SoftmaxCrossEntropyTest, GradientIsSoftmaxMinusOneHot) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    const Tensor logits = testing::random_tensor({5}, rng, -3.0, 3.0);
    const auto r = softmax_cross_entropy(logits, t % 5);
    const auto p = softmax(logits.values());
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      sum += p[i];
      EXPECT_NEAR(r.grad[i], p[i] - (i == std::size_t(t % 5) ? 1.0 : 0.0), 1e-15);
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    ScalarFunction f{
        [&](const Tensor& v) { return softmax_cross_entropy(v, t % 5).loss; },
        [&](const Tensor& v) { return softmax_cross_entropy(v, t % 5).grad; }};
    EXPECT_LE(finite_diff_check(f, logits, 1e-3), 1e-3);
  }
}

TEST(SmoothL1Test, KnownValuesAndGradient) {
  EXPECT_EQ(smooth_l1(Tensor({1}, 0.0)).loss, 0.0);
  EXPECT_EQ(smooth_l1(Tensor({1}, 0.5)).loss, 0.125);
  EXPECT_EQ(smooth_l1(Tensor({1}, 2.0)).loss, 1.5);
  EXPECT_EQ(smooth_l1(Tensor({1}, -2.0)).loss, 1.5);
  const Tensor x({6}, {-2.5, -0.7, -0.1, 0.3, 0.9, 1.8});
  ScalarFunction f{[](const Tensor& v) { return smooth_l1(v).loss; },
                   [](const Tensor& v) { return smooth_l1(v).grad; }};
  EXPECT_LE(finite_diff_check(f, x, 1e-3), 1e-3);
}

TEST(SgdTest, StepAndZeroGrad) {
  Parameter p("w", Tensor({1}, 1.0));
  p.grad[0] = 0.5;
  std::vector<Parameter*> params{&p};
  sgd_step(params, 0.001);
  EXPECT_DOUBLE_EQ(p.value[0], 0.9995);
  EXPECT_EQ(p.grad[0], 0.0);
  sgd_step(params, 0.001);
  EXPECT_DOUBLE_EQ(p.value[0], 0.9995);
}

TEST(SgdTest, TwoStepsEqualOneSummedStep) {
  std::mt19937_64 rng(12);
  const Tensor w0 = testing::random_tensor({10}, rng);
  const Tensor g1 = testing::random_tensor({10}, rng);
  const Tensor g2 = testing::random_tensor({10}, rng);
  Parameter a("a", w0), b("b", w0);
  std::vector<Parameter*> pa{&a}, pb{&b};
  a.grad = g1;
  sgd_step(pa, 0.01);
  a.grad = g2;
  sgd_step(pa, 0.01);
  b.grad = g1;
  add_inplace(b.grad, g2);
  sgd_step(pb, 0.01);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_NEAR(a.value[i], b.value[i], 1e-15);
}

TEST(SgdTest, OptimizerWithoutMomentumIsPlainSgd) {
  Parameter a("a", Tensor({2}, {1.0, -1.0})), b = a;
  a.grad = Tensor({2}, {0.3, 0.2});
  b.grad = a.grad;
  std::vector<Parameter*> pa{&a}, pb{&b};
  SgdOptimizer opt(0.0);
  opt.step(pa, 0.1);
  sgd_step(pb, 0.1);
  EXPECT_EQ(a.value, b.value);

  Parameter m("m", Tensor({1}, 0.0));
  std::vector<Parameter*> pm{&m};
  SgdOptimizer heavy(0.5);
  m.grad[0] = 1.0;
  heavy.step(pm, 1.0);
  m.grad[0] = 1.0;
  heavy.step(pm, 1.0);
  EXPECT_DOUBLE_EQ(m.value[0], -2.5);  // -1 then -(0.5 + 1)
}

TEST(LrScheduleTest, DecaysEveryFiveEpochs) {
  const TrainHyperparams hp;
  EXPECT_DOUBLE_EQ(lr_schedule(hp, 0), 0.001);
  EXPECT_DOUBLE_EQ(lr_schedule(hp, 4), 0.001);
  EXPECT_NEAR(lr_schedule(hp, 5), 0.0001, 1e-18);
  EXPECT_NEAR(lr_schedule(hp, 10), 0.00001, 1e-18);
  EXPECT_EQ(hp.batch_size, 4);
  EXPECT_THROW(lr_schedule(hp, -1), ConfigError);
  TrainHyperparams bad;
  bad.decay_factor = 0.0;
  EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(FiniteDiffCheckTest, LinearFunctionIsNearlyExact) {
  std::mt19937_64 rng(13);
  const Tensor c = testing::random_tensor({8}, rng);
  ScalarFunction f{[&](const Tensor& v) { return weighted_sum(v, c) + 3.0; },
                   [&](const Tensor&) { return c; }};
  EXPECT_LE(finite_diff_check(f, testing::random_tensor({8}, rng), 1e-3), 1e-6);
}

TEST(FiniteDiffCheckTest, DetectsWrongGradient) {
  ScalarFunction f{[](const Tensor& v) { return v[0] * v[0]; },
                   [](const Tensor& v) { return Tensor({1}, {v[0]}); }};
  EXPECT_GT(finite_diff_check(f, Tensor({1}, 2.0), 1e-3), 0.4);
}

TEST(PadCircularTest, WrapsBothAxes) {
  const Tensor x({1, 1, 2, 3}, {1, 2, 3, 4, 5, 6});
  const Tensor p = pad_circular(x, 1);
  ASSERT_EQ(p.shape(), (Shape{1, 1, 4, 5}));
  EXPECT_EQ(p.at(0, 0, 0, 0), 6.0);
  EXPECT_EQ(p.at(0, 0, 1, 1), 1.0);
  EXPECT_EQ(p.at(0, 0, 3, 4), 1.0);
}

TEST(TensorTest, ShapeChecks) {
  EXPECT_THROW(Tensor({2, 2}, std::vector<double>{1, 2, 3}), ShapeError);
  EXPECT_THROW(Tensor({2, 0}), ShapeError);
  Tensor t({2, 3});
  EXPECT_THROW(t.reshape({4}), ShapeError);
  Tensor bad({1}, std::vector<double>{std::nan("")});
  EXPECT_THROW(check_finite(bad, "op"), NumericError);
}

}  // namespace
}  // namespace docdet::numerics

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

#include "docdet/data/synth.h"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "docdet/error.h"

namespace docdet::data {
namespace {

class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32), 0x5eedu};
    engine_.seed(seq);
  }
  // Inclusive on both ends.
  int uniform_int(int lo, int hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(engine_() >> 11) * 0x1.0p-53);
  }
  bool bernoulli(double p) { return uniform() < p; }
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[static_cast<std::size_t>(engine_() % i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

struct Extent {
  int x0 = INT_MAX, y0 = INT_MAX, x1 = INT_MIN, y1 = INT_MIN;
  void add(int x, int y) {
    x0 = std::min(x0, x);
    y0 = std::min(y0, y);
    x1 = std::max(x1, x);
    y1 = std::max(y1, y);
  }
  bool empty() const { return x1 < x0; }
  geometry::Box box() const { return {double(x0), double(y0), double(x1 + 1), double(y1 + 1)}; }
};

class Canvas {
 public:
  explicit Canvas(DocumentImage& img) : img_(img) { reset_clip(); }

  void track(Extent* e) { track_ = e; }
  void clip(int x0, int y0, int x1, int y1) {
    cx0_ = std::max(0, x0);
    cy0_ = std::max(0, y0);
    cx1_ = std::min(img_.width(), x1);
    cy1_ = std::min(img_.height(), y1);
  }
  void reset_clip() { clip(0, 0, img_.width(), img_.height()); }

  void put(int x, int y, Rgb c) {
    if (x < cx0_ || y < cy0_ || x >= cx1_ || y >= cy1_) return;
    img_.set(x, y, c);
    if (track_) track_->add(x, y);
  }
  // Half-open [x0, x1) x [y0, y1).
  void rect(int x0, int y0, int x1, int y1, Rgb c) {
    for (int y = y0; y < y1; ++y)
      for (int x = x0; x < x1; ++x) put(x, y, c);
  }
  void outline(int x0, int y0, int x1, int y1, int t, Rgb c) {
    rect(x0, y0, x1, y0 + t, c);
    rect(x0, y1 - t, x1, y1, c);
    rect(x0, y0, x0 + t, y1, c);
    rect(x1 - t, y0, x1, y1, c);
  }
  void line(double x0, double y0, double x1, double y1, int t, Rgb c) {
    const int steps = static_cast<int>(std::ceil(std::max(std::abs(x1 - x0), std::abs(y1 - y0)))) + 1;
    for (int s = 0; s <= steps; ++s) {
      const double u = static_cast<double>(s) / steps;
      const int px = static_cast<int>(std::lround(x0 + u * (x1 - x0)));
      const int py = static_cast<int>(std::lround(y0 + u * (y1 - y0)));
      rect(px - (t - 1) / 2, py - (t - 1) / 2, px - (t - 1) / 2 + t, py - (t - 1) / 2 + t, c);
    }
  }
  void ellipse(double cx, double cy, double rx, double ry, Rgb c, bool filled) {
    if (filled) {
      for (int y = static_cast<int>(std::floor(cy - ry)); y <= static_cast<int>(std::ceil(cy + ry)); ++y) {
        const double dy = (y - cy) / std::max(ry, 0.5);
        if (dy * dy > 1.0) continue;
        const double half = rx * std::sqrt(1.0 - dy * dy);
        for (int x = static_cast<int>(std::ceil(cx - half)); x <= static_cast<int>(std::floor(cx + half)); ++x) {
          put(x, y, c);
        }
      }
      return;
    }
    const int n = static_cast<int>(4 * (rx + ry)) + 8;
    for (int k = 0; k < n; ++k) {
      const double a = 2.0 * std::numbers::pi * k / n;
      put(static_cast<int>(std::lround(cx + rx * std::cos(a))),
          static_cast<int>(std::lround(cy + ry * std::sin(a))), c);
    }
  }

 private:
  DocumentImage& img_;
  Extent* track_ = nullptr;
  int cx0_ = 0, cy0_ = 0, cx1_ = 0, cy1_ = 0;
};

Rgb gray(int v) {
  const auto u = static_cast<std::uint8_t>(std::clamp(v, 0, 254));
  return {u, u, u};
}

Rgb darken(Rgb c, int by) {
  auto d = [by](std::uint8_t v) { return static_cast<std::uint8_t>(std::max(0, v - by)); };
  return {d(c.r), d(c.g), d(c.b)};
}

enum class Kind { kTable, kFigure, kEquation };

struct Planned {
  Kind kind;
  bool mandatory = false;
  int style = 0;
  int w = 0, h = 0;
  int rows = 0;           // tables
  bool fraction = false;  // equations
  int x = 0, y = 0;
};

constexpr int kGap = 12;       // object margin above and below
constexpr int kPitch = 12;     // text line pitch
constexpr int kBarHeight = 6;  // text bar height

int pick(Rng& rng, std::initializer_list<double> weights) {
  double u = rng.uniform();
  int i = 0;
  for (double w : weights) {
    if (u < w) return i;
    u -= w;
    ++i;
  }
  return i - 1;
}

int equation_height(const SynthConfig& cfg, bool fraction) {
  const int gh = cfg.equation.glyph_height;
  const int sup = static_cast<int>(std::lround(0.6 * gh));
  return fraction ? 2 * gh + sup + 5 : gh + sup + 2;
}

void size_object(Planned& p, const SynthConfig& cfg, Rng& rng, int cw, bool minimal) {
  switch (p.kind) {
    case Kind::kTable: {
      p.w = static_cast<int>(std::lround(cw * rng.uniform(0.7, 1.0)));
      p.rows = minimal ? 3 : rng.uniform_int(3, 9);
      const int row_h = minimal ? 12 : rng.uniform_int(12, 17);
      p.h = p.rows * row_h;
      p.style = pick(rng, {cfg.table_mix.ruled, cfg.table_mix.unruled, cfg.table_mix.alternating});
      break;
    }
    case Kind::kFigure:
      p.w = static_cast<int>(std::lround(cw * rng.uniform(0.5, 0.95)));
      p.h = minimal ? 60 : std::clamp(static_cast<int>(std::lround(p.w * rng.uniform(0.45, 0.8))), 60, 260);
      p.style = pick(rng, {cfg.figure_mix.plot, cfg.figure_mix.blob});
      break;
    case Kind::kEquation:
      p.w = static_cast<int>(std::lround(cw * rng.uniform(0.2, 0.5)));
      p.fraction = !minimal && rng.bernoulli(cfg.equation.fraction_probability);
      p.h = equation_height(cfg, p.fraction);
      break;
  }
  p.w = std::max(p.w, 24);
}

// ---- body text ------------------------------------------------------------

void draw_text_slot(Canvas& cv, Rng& rng, const SynthConfig& cfg, int x, int cw, int y0,
                    int y1) {
  int left_in_paragraph = rng.uniform_int(3, 8);
  bool first = true;
  for (int y = y0; y + kBarHeight <= y1; y += kPitch) {
    const Rgb c = gray(cfg.text_gray + rng.uniform_int(-12, 12));
    --left_in_paragraph;
    const bool last = left_in_paragraph == 0;
    const int end = last ? x + static_cast<int>(cw * rng.uniform(0.3, 0.9)) : x + cw;
    int cx = (first && rng.bernoulli(0.5)) ? x + 12 : x;
    first = false;
    while (cx < end - 4) {
      const int len = std::min(rng.uniform_int(8, 40), end - cx);
      cv.rect(cx, y, cx + len, y + kBarHeight, c);
      cx += len + rng.uniform_int(4, 6);
    }
    if (last) {
      y += kPitch;  // blank line between paragraphs
      left_in_paragraph = rng.uniform_int(3, 8);
      first = true;
    }
  }
}

// ---- tables ---------------------------------------------------------------

void cell_bars(Canvas& cv, Rng& rng, const SynthConfig& cfg, const std::vector<int>& bx,
               int y, int rows, int row_h, int inset) {
  for (int r = 0; r < rows; ++r) {
    const int bar_h = std::min(r == 0 ? 6 : 5, row_h - 6);
    const int by = y + r * row_h + (row_h - bar_h) / 2;
    for (std::size_t k = 0; k + 1 < bx.size(); ++k) {
      if (r > 0 && rng.bernoulli(0.12)) continue;
      const int avail = bx[k + 1] - bx[k] - 2 * 4 - inset;
      if (avail < 4) continue;
      const int len = std::max(3, static_cast<int>(avail * rng.uniform(0.3, 0.9)));
      const int bx0 = bx[k] + 4 + inset;
      cv.rect(bx0, by, bx0 + len, by + bar_h, r == 0 ? darken(cfg.table_ink, 30) : cfg.table_ink);
    }
  }
}

void draw_table(Canvas& cv, Rng& rng, const SynthConfig& cfg, const Planned& p) {
  const int row_h = p.h / p.rows;
  const int max_cols = std::clamp(p.w / 40, 2, 7);
  const int cols = rng.uniform_int(2, max_cols);
  std::vector<double> wts(cols);
  double total = 0;
  for (double& w : wts) total += (w = rng.uniform(0.6, 1.4));
  std::vector<int> bx{p.x};
  double acc = 0;
  for (int k = 0; k < cols; ++k) {
    acc += wts[k];
    bx.push_back(p.x + static_cast<int>(std::lround(p.w * acc / total)));
  }
  bx.back() = p.x + p.w;
  const int t = cfg.rule_thickness;
  const Rgb rule = darken(cfg.table_ink, 15);

  switch (p.style) {
    case 0: {  // ruled grid
      for (int r = 0; r <= p.rows; ++r) {
        const int yy = std::min(p.y + r * row_h, p.y + p.h - t);
        cv.rect(p.x, yy, p.x + p.w, yy + t, rule);
      }
      for (int k = 0; k <= cols; ++k) {
        const int xx = std::min(bx[k], p.x + p.w - t);
        cv.rect(xx, p.y, xx + t, p.y + p.h, rule);
      }
      cell_bars(cv, rng, cfg, bx, p.y, p.rows, row_h, t);
      break;
    }
    case 1: {  // whitespace-aligned columns, optionally with top/header/bottom rules
      if (rng.bernoulli(0.5)) {
        cv.rect(p.x, p.y, p.x + p.w, p.y + t + 1, rule);
        cv.rect(p.x, p.y + row_h, p.x + p.w, p.y + row_h + t, rule);
        cv.rect(p.x, p.y + p.h - t - 1, p.x + p.w, p.y + p.h, rule);
      }
      cell_bars(cv, rng, cfg, bx, p.y, p.rows, row_h, 0);
      break;
    }
    default: {  // alternating row fill
      for (int r = 0; r < p.rows; ++r) {
        const int yy = p.y + r * row_h;
        if (r == 0) {
          cv.rect(p.x, yy, p.x + p.w, yy + row_h, darken(cfg.alternating_fill, 35));
        } else if (r % 2 == 1) {
          cv.rect(p.x, yy, p.x + p.w, yy + row_h, cfg.alternating_fill);
        }
      }
      cell_bars(cv, rng, cfg, bx, p.y, p.rows, row_h, 0);
      break;
    }
  }
}

// ---- figures --------------------------------------------------------------

const std::array<std::array<Rgb, 5>, 2> kPalettes{{
    {{{31, 119, 180}, {214, 39, 40}, {44, 160, 44}, {255, 127, 14}, {148, 103, 189}}},
    {{{230, 85, 13}, {49, 163, 84}, {117, 107, 177}, {222, 45, 38}, {8, 81, 156}}},
}};

void draw_plot(Canvas& cv, Rng& rng, const SynthConfig& cfg, const Planned& p) {
  const auto& pal = kPalettes[static_cast<std::size_t>(cfg.figure_palette) % kPalettes.size()];
  const Rgb axis = gray(35);
  if (rng.bernoulli(0.4)) cv.outline(p.x, p.y, p.x + p.w, p.y + p.h, 1, gray(90));
  const int ax = p.x + rng.uniform_int(12, 18);
  const int ay = p.y + p.h - rng.uniform_int(11, 15);
  const int top = p.y + 4;
  const int right = p.x + p.w - 4;
  cv.rect(ax, top, ax + 1, ay + 1, axis);
  cv.rect(ax, ay, right, ay + 1, axis);
  const int xticks = rng.uniform_int(4, 8);
  for (int k = 1; k <= xticks; ++k) {
    const int tx = ax + (right - ax) * k / (xticks + 1);
    cv.rect(tx, ay + 1, tx + 1, ay + 4, axis);
    cv.rect(tx - 4, ay + 6, tx + 4, ay + 9, gray(110));
  }
  const int yticks = rng.uniform_int(3, 5);
  for (int k = 1; k <= yticks; ++k) {
    const int ty = ay - (ay - top) * k / (yticks + 1);
    cv.rect(ax - 3, ty, ax, ty + 1, axis);
    cv.rect(p.x + 2, ty - 1, ax - 5, ty + 2, gray(110));
  }
  const int x0 = ax + 3, x1 = right - 2, y0 = top + 4, y1 = ay - 4;
  if (rng.bernoulli(0.3)) {  // bar chart
    const int n = rng.uniform_int(4, 10);
    const double slot = static_cast<double>(x1 - x0) / n;
    const Rgb c = pal[static_cast<std::size_t>(rng.uniform_int(0, 4))];
    for (int k = 0; k < n; ++k) {
      const int bh = static_cast<int>((y1 - y0) * rng.uniform(0.15, 1.0));
      const int bx0 = x0 + static_cast<int>(k * slot + slot * 0.15);
      const int bx1 = x0 + static_cast<int>((k + 1) * slot - slot * 0.15);
      cv.rect(bx0, ay - bh, std::max(bx1, bx0 + 1), ay, c);
    }
    return;
  }
  const int curves = rng.uniform_int(1, 3);
  for (int c = 0; c < curves; ++c) {
    const Rgb color = pal[static_cast<std::size_t>((c + rng.uniform_int(0, 4)) % 5)];
    double a[3], f[3], ph[3];
    for (int k = 0; k < 3; ++k) {
      a[k] = rng.uniform(0.05, 0.25) / (k + 1);
      f[k] = rng.uniform(0.5, 2.5) * (k + 1);
      ph[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    }
    const double slope = rng.uniform(-0.4, 0.4);
    auto value = [&](double t) {
      double v = 0.5 + slope * (t - 0.5);
      for (int k = 0; k < 3; ++k) v += a[k] * std::sin(2.0 * std::numbers::pi * f[k] * t + ph[k]);
      return std::clamp(v, 0.0, 1.0);
    };
    const bool markers = rng.bernoulli(0.3);
    double px = x0, py = y1 - value(0.0) * (y1 - y0);
    for (int x = x0 + 3; x <= x1; x += 3) {
      const double t = static_cast<double>(x - x0) / (x1 - x0);
      const double y = y1 - value(t) * (y1 - y0);
      cv.line(px, py, x, y, 2, color);
      if (markers && (x - x0) % 21 == 0) {
        cv.rect(x - 2, static_cast<int>(y) - 2, x + 3, static_cast<int>(y) + 3, color);
      }
      px = x;
      py = y;
    }
  }
}

void draw_blob(Canvas& cv, Rng& rng, const SynthConfig& cfg, const Planned& p) {
  const auto& pal = kPalettes[static_cast<std::size_t>(cfg.figure_palette) % kPalettes.size()];
  auto pastel = [&] {
    return Rgb{static_cast<std::uint8_t>(rng.uniform_int(195, 245)),
               static_cast<std::uint8_t>(rng.uniform_int(195, 245)),
               static_cast<std::uint8_t>(rng.uniform_int(195, 245))};
  };
  const Rgb a = pastel();
  if (rng.bernoulli(0.4)) {
    const Rgb b = pastel();
    for (int y = 0; y < p.h; ++y) {
      const double u = static_cast<double>(y) / std::max(1, p.h - 1);
      auto mix = [u](std::uint8_t s, std::uint8_t t) {
        return static_cast<std::uint8_t>(std::lround(s + u * (t - s)));
      };
      cv.rect(p.x, p.y + y, p.x + p.w, p.y + y + 1, {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)});
    }
  } else {
    cv.rect(p.x, p.y, p.x + p.w, p.y + p.h, a);
  }
  const int n = rng.uniform_int(3, 8);
  const double rmax = std::max(7.0, std::min(p.w, p.h) / 3.0);
  for (int k = 0; k < n; ++k) {
    Rgb c = pal[static_cast<std::size_t>(rng.uniform_int(0, 4))];
    c = darken(c, rng.uniform_int(0, 40));
    const double cx = p.x + rng.uniform(0.1, 0.9) * p.w;
    const double cy = p.y + rng.uniform(0.1, 0.9) * p.h;
    if (rng.bernoulli(0.3)) {
      const int hw = rng.uniform_int(4, static_cast<int>(rmax));
      const int hh = rng.uniform_int(4, static_cast<int>(rmax));
      cv.rect(static_cast<int>(cx) - hw, static_cast<int>(cy) - hh, static_cast<int>(cx) + hw,
              static_cast<int>(cy) + hh, c);
    } else {
      cv.ellipse(cx, cy, rng.uniform(5.0, rmax), rng.uniform(5.0, rmax), c, true);
    }
  }
  if (rng.bernoulli(0.5)) cv.outline(p.x, p.y, p.x + p.w, p.y + p.h, 1, gray(60));
}

// ---- equations ------------------------------------------------------------

void glyph(Canvas& cv, int type, int x, int y, int w, int h, int t, Rgb c) {
  const int xm = x + (w - 1) / 2, ym = y + (h - 1) / 2;
  switch (type) {
    case 0:  // stroke with foot
      cv.line(xm, y, xm, y + h - 1, t, c);
      cv.line(x + 1, y + h - 1, x + w - 2, y + h - 1, 1, c);
      break;
    case 1:
      cv.ellipse(x + (w - 1) / 2.0, y + (h - 1) / 2.0, (w - 1) / 2.0, (h - 1) / 2.0, c, false);
      break;
    case 2:
      cv.line(x, y + h / 3, x + w - 1, y + h - 1, t, c);
      cv.line(x + w - 1, y + h / 3, x, y + h - 1, t, c);
      break;
    case 3:
      cv.line(x, ym, x + w - 1, ym, 1, c);
      cv.line(xm, y + 1, xm, y + h - 2, 1, c);
      break;
    case 4:
      cv.line(x, y + h / 3, x + w - 1, y + h / 3, 1, c);
      cv.line(x, y + 2 * h / 3, x + w - 1, y + 2 * h / 3, 1, c);
      break;
    case 5:  // n-like
      cv.line(x, y + h / 3, x, y + h - 1, t, c);
      cv.line(x, y + h / 3, x + w - 1, y + h / 3, 1, c);
      cv.line(x + w - 1, y + h / 3, x + w - 1, y + h - 1, t, c);
      break;
    case 6:  // sigma-like
      cv.line(x, y, x + w - 1, y, 1, c);
      cv.line(x, y, xm, ym, t, c);
      cv.line(xm, ym, x, y + h - 1, t, c);
      cv.line(x, y + h - 1, x + w - 1, y + h - 1, 1, c);
      break;
    default:  // bracket
      cv.line(x + w - 2, y, x + 1, ym, 1, c);
      cv.line(x + 1, ym, x + w - 2, y + h - 1, 1, c);
      break;
  }
}

// Draws a run of glyphs with optional superscripts; returns the end x.
int glyph_run(Canvas& cv, Rng& rng, const SynthConfig& cfg, int x, int x_end, int top,
              double sup_p) {
  const int gh = cfg.equation.glyph_height;
  const int sup = static_cast<int>(std::lround(0.6 * gh));
  const Rgb ink = cfg.equation.ink;
  int cx = x;
  while (cx + 8 <= x_end) {
    const int gw = rng.uniform_int(5, 8);
    glyph(cv, rng.uniform_int(0, 7), cx, top, gw, gh, rng.bernoulli(0.3) ? 2 : 1, ink);
    cx += gw + rng.uniform_int(1, 3);
    if (cx + 6 <= x_end && rng.bernoulli(sup_p)) {
      const int sw = std::max(3, gw * 3 / 5);
      glyph(cv, rng.uniform_int(0, 7), cx, top - sup + 2, sw, sup, 1, ink);
      cx += sw + 2;
    }
    if (rng.bernoulli(0.12)) cx += 6;
  }
  return cx;
}

void draw_equation(Canvas& cv, Rng& rng, const SynthConfig& cfg, const Planned& p) {
  const int gh = cfg.equation.glyph_height;
  const int sup = static_cast<int>(std::lround(0.6 * gh));
  const double sp = cfg.equation.superscript_probability;
  const int first = p.y + sup + 1;
  if (!p.fraction) {
    glyph_run(cv, rng, cfg, p.x, p.x + p.w, first, sp);
    return;
  }
  const int bar_y = first + gh + 2;
  const int mid_top = bar_y - gh / 2;
  const int lead = static_cast<int>(p.w * rng.uniform(0.0, 0.4));
  int cx = glyph_run(cv, rng, cfg, p.x, p.x + lead, mid_top, sp);
  const int frac_w = std::max(20, static_cast<int>(p.w * rng.uniform(0.25, 0.45)));
  const int fx = cx + 2;
  const int fend = std::min(p.x + p.w, fx + frac_w);
  glyph_run(cv, rng, cfg, fx + 2, fend - 2, first, 0.0);
  cv.rect(fx, bar_y, fend, bar_y + 1, cfg.equation.ink);
  glyph_run(cv, rng, cfg, fx + 2, fend - 2, bar_y + 3, 0.0);
  glyph_run(cv, rng, cfg, fend + 4, p.x + p.w, mid_top, sp);
}

}  // namespace

void SynthConfig::validate() const {
  if (page_width < 64 || page_height < 64) {
    throw ConfigError("synth page size must be at least 64x64");
  }
  for (const auto* r : {&tables, &figures, &equations}) {
    if (r->min < 0 || r->max < r->min) {
      throw ConfigError("synth object count ranges need 0 <= min <= max");
    }
  }
  auto check_mix = [](std::initializer_list<double> parts, const char* what) {
    double sum = 0;
    for (double v : parts) {
      if (!(v >= 0.0)) throw ConfigError(std::string(what) + " weights must be >= 0");
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError(std::string(what) + " must sum to 1");
  };
  check_mix({table_mix.ruled, table_mix.unruled, table_mix.alternating}, "table style mix");
  check_mix({figure_mix.plot, figure_mix.blob}, "figure style mix");
  if (equation.glyph_height < 6 || equation.glyph_height > 40) {
    throw ConfigError("equation glyph height must lie in [6, 40]");
  }
  for (double p : {equation.superscript_probability, equation.fraction_probability,
                   two_column_probability}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("synth probabilities must lie in [0, 1]");
  }
  if (text_gray < 0 || text_gray > 200) throw ConfigError("text gray must lie in [0, 200]");
  if (rule_thickness < 1 || rule_thickness > 4) throw ConfigError("rule thickness must lie in [1, 4]");
  if (figure_palette < 0 || figure_palette > 1) throw ConfigError("figure palette must be 0 or 1");
}

SynthConfig SynthConfig::style_shifted() {
  SynthConfig s;
  s.table_mix = {0.2, 0.3, 0.5};
  s.figure_mix = {0.35, 0.65};
  s.equation.glyph_height = 14;
  s.equation.superscript_probability = 0.5;
  s.equation.ink = {10, 10, 80};
  s.two_column_probability = 0.7;
  s.text_gray = 95;
  s.rule_thickness = 2;
  s.table_ink = {20, 20, 70};
  s.alternating_fill = {228, 243, 224};
  s.figure_palette = 1;
  return s;
}

AnnotatedDocument synth_page(const SynthConfig& cfg, std::uint64_t index) {
  cfg.validate();
  Rng rng(cfg.seed, index);
  const geometry::LabelSet labels = geometry::LabelSet::document_objects();
  const int W = cfg.page_width, H = cfg.page_height;
  const int hmargin = static_cast<int>(std::lround(0.07 * W));
  const int vmargin = static_cast<int>(std::lround(0.06 * H));
  const int gutter = 20;
  const int cols = (W >= 400 && rng.bernoulli(cfg.two_column_probability)) ? 2 : 1;
  const int cw = (W - 2 * hmargin - gutter * (cols - 1)) / cols;
  const int col_h = H - 2 * vmargin;

  std::vector<Planned> objects;
  auto request = [&](Kind k, const CountRange& r) {
    const int n = rng.uniform_int(r.min, r.max);
    for (int i = 0; i < n; ++i) objects.push_back({k, i < r.min});
  };
  request(Kind::kTable, cfg.tables);
  request(Kind::kFigure, cfg.figures);
  request(Kind::kEquation, cfg.equations);
  rng.shuffle(objects);
  std::stable_partition(objects.begin(), objects.end(),
                        [](const Planned& p) { return p.mandatory; });

  std::vector<int> remaining(cols, col_h);
  std::vector<std::vector<Planned>> per_col(cols);
  for (Planned& p : objects) {
    size_object(p, cfg, rng, cw, false);
    const int c = static_cast<int>(std::max_element(remaining.begin(), remaining.end()) - remaining.begin());
    if (p.h + 2 * kGap > remaining[c] && p.mandatory) size_object(p, cfg, rng, cw, true);
    if (p.h + 2 * kGap > remaining[c]) {
      if (p.mandatory) {
        throw ConfigError("synth page " + std::to_string(W) + "x" + std::to_string(H) +
                          " is too small for the requested minimum object counts");
      }
      continue;
    }
    remaining[c] -= p.h + 2 * kGap;
    per_col[c].push_back(p);
  }

  AnnotatedDocument doc;
  char id[32];
  std::snprintf(id, sizeof(id), "synth-%06llu", static_cast<unsigned long long>(index));
  doc.id = id;
  doc.image = DocumentImage(W, H, kWhite);
  Canvas cv(doc.image);

  for (int c = 0; c < cols; ++c) {
    const int cx = hmargin + c * (cw + gutter);
    auto& blocks = per_col[c];
    rng.shuffle(blocks);
    std::vector<double> weights(blocks.size() + 1);
    double total = 0;
    for (double& w : weights) total += (w = rng.uniform(0.2, 1.0));
    int y = vmargin;
    for (std::size_t k = 0; k <= blocks.size(); ++k) {
      const int slot = static_cast<int>(std::floor(remaining[c] * weights[k] / total));
      cv.reset_clip();
      cv.track(nullptr);
      draw_text_slot(cv, rng, cfg, cx, cw, y, y + slot);
      y += slot;
      if (k == blocks.size()) break;
      Planned& p = blocks[k];
      p.y = y + kGap;
      p.x = p.kind == Kind::kEquation
                ? cx + (cw - p.w) / 2 + rng.uniform_int(-(cw - p.w) / 4, (cw - p.w) / 4)
                : cx + static_cast<int>(std::lround((cw - p.w) * rng.uniform()));
      Extent ink;
      cv.clip(p.x, p.y, p.x + p.w, p.y + p.h);
      cv.track(&ink);
      geometry::ClassId label = 0;
      switch (p.kind) {
        case Kind::kTable:
          draw_table(cv, rng, cfg, p);
          label = labels.id("table");
          break;
        case Kind::kFigure:
          if (p.style == 0) {
            draw_plot(cv, rng, cfg, p);
          } else {
            draw_blob(cv, rng, cfg, p);
          }
          label = labels.id("figure");
          break;
        case Kind::kEquation:
          draw_equation(cv, rng, cfg, p);
          label = labels.id("equation");
          break;
      }
      if (!ink.empty()) doc.annotations.push_back({ink.box(), label});
      y += p.h + 2 * kGap;
    }
  }
  cv.track(nullptr);
  return doc;
}

}  // namespace docdet::data

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

#include <algorithm>
#include <fstream>
#include <set>
#include <string>

#include "docdet/data/image.h"
#include "docdet/data/manifest.h"
#include "docdet/data/png_io.h"
#include "docdet/data/render.h"
#include "docdet/data/split.h"
#include "docdet/data/synth.h"
#include "docdet/data/voc.h"
#include "docdet/error.h"
#include "test_util.h"

namespace docdet::data {
namespace {

using geometry::Box;
using geometry::LabelSet;

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

DocumentImage checker(int w, int h) {
  DocumentImage img(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      img.set(x, y, {static_cast<std::uint8_t>(x * 7), static_cast<std::uint8_t>(y * 13),
                     static_cast<std::uint8_t>((x + y) % 256)});
  return img;
}

std::string manifest_json(const std::string& entries) {
  return R"({"schema": "docdet.manifest", "version": 1, "name": "t", "split": "test",
  "labels": ["table", "figure", "equation"], "entries": [)" +
         entries + "]}";
}

TEST(ImageTest, RejectsEmptyDimensions) {
  EXPECT_THROW(DocumentImage(0, 5), DataError);
  EXPECT_THROW(DocumentImage(3, 3, std::vector<std::uint8_t>(5)), DataError);
  DocumentImage img(2, 3, Rgb{1, 2, 3});
  EXPECT_EQ(img.at(1, 2), (Rgb{1, 2, 3}));
}

TEST(PngTest, RoundtripIsBitExact) {
  testing::TempDir dir("png");
  const DocumentImage img = checker(37, 23);
  write_png(dir / "a.png", img);
  EXPECT_EQ(read_png(dir / "a.png"), img);
  EXPECT_EQ(read_png_size(dir / "a.png"), std::make_pair(37, 23));
  EXPECT_FALSE(std::filesystem::exists(dir / "a.png.tmp"));
}

TEST(PngTest, MalformedFileIsDataError) {
  testing::TempDir dir("png-bad");
  write_file(dir / "bad.png", "not a png at all");
  EXPECT_THROW(read_png(dir / "bad.png"), DataError);
  EXPECT_THROW(read_png(dir / "missing.png"), DataError);
}

class ManifestTest : public ::testing::Test {
 protected:
  ManifestTest() : dir_("manifest") {
    std::filesystem::create_directories(dir_ / "img");
    write_png(dir_ / "img/a.png", DocumentImage(600, 600));
    write_png(dir_ / "img/b.png", DocumentImage(40, 30));
  }
  testing::TempDir dir_;
};

TEST_F(ManifestTest, EmptyEntryListIsValid) {
  write_file(dir_ / "m.json", manifest_json(""));
  const DatasetManifest m = load_manifest(dir_ / "m.json");
  EXPECT_TRUE(m.entries.empty());
  EXPECT_EQ(m.split, Split::kTest);
  EXPECT_EQ(m.labels, LabelSet::document_objects());
}

TEST_F(ManifestTest, OutOfBoundsBoxIsClippedAndCounted) {
  write_file(dir_ / "m.json",
             manifest_json(R"({"id": "a", "image": "img/a.png", "width": 600, "height": 600,
               "objects": [{"label": "table", "box": [-5, 0, 10, 10]},
                           {"label": "figure", "box": [1, 2, 3, 4]}]})"));
  LoadReport report;
  const DatasetManifest m = load_manifest(dir_ / "m.json", &report);
  EXPECT_EQ(report.clipped_boxes, 1u);
  ASSERT_EQ(m.entries[0].objects.size(), 2u);
  EXPECT_EQ(m.entries[0].objects[0].box, (Box{0, 0, 10, 10}));
  EXPECT_EQ(m.entries[0].objects[1].label, 1);
}

TEST_F(ManifestTest, SaveLoadRoundtripIsIdentity) {
  DatasetManifest m;
  m.name = "roundtrip";
  m.labels = LabelSet::document_objects();
  m.split = Split::kTrain;
  m.base_dir = dir_.path();
  m.entries.push_back({"a", "img/a.png", 600, 600,
                       {{{0.1, 0.2, 300.30000000000001, 599.9999}, 0},
                        {{1.0 / 3.0, 2.0 / 7.0, 10.5, 11.25}, 2}}});
  m.entries.push_back({"b", "img/b.png", 40, 30, {}});
  save_manifest(m, dir_ / "m.json");
  const DatasetManifest back = load_manifest(dir_ / "m.json");
  EXPECT_EQ(back, m);

  // Saving elsewhere rebases the image paths.
  save_manifest(back, dir_ / "sub/deeper/m2.json");
  const DatasetManifest moved = load_manifest(dir_ / "sub/deeper/m2.json");
  EXPECT_EQ(moved.entries[0].image, "../../img/a.png");
  EXPECT_EQ(moved.entries[0].objects, m.entries[0].objects);
}

TEST_F(ManifestTest, ParseErrorReportsLine) {
  write_file(dir_ / "m.json", "{\n  \"schema\": \"docdet.manifest\",\n  \"version\": 1,,\n}");
  try {
    load_manifest(dir_ / "m.json");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("m.json:3:"), std::string::npos) << e.what();
  }
}

TEST_F(ManifestTest, FieldErrorsNameTheField) {
  write_file(dir_ / "m.json",
             manifest_json(R"({"id": "a", "image": "img/a.png", "width": 600, "height": 600,
               "objects": [{"label": "table", "box": [0, 0, 10]}]})"));
  try {
    load_manifest(dir_ / "m.json");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("$.entries[0].objects[0].box"), std::string::npos)
        << e.what();
  }
  write_file(dir_ / "m.json",
             manifest_json(R"({"id": "a", "image": "img/a.png", "width": 600, "height": 600,
               "objects": [{"label": "chart", "box": [0, 0, 10, 10]}]})"));
  try {
    load_manifest(dir_ / "m.json");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown label 'chart'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("table, figure, equation"), std::string::npos);
  }
}

TEST_F(ManifestTest, MissingImagesAreListedByPath) {
  write_file(dir_ / "m.json",
             manifest_json(R"({"id": "x", "image": "img/nope1.png", "width": 5, "height": 5, "objects": []},
                              {"id": "y", "image": "img/nope2.png", "width": 5, "height": 5, "objects": []})"));
  try {
    load_manifest(dir_ / "m.json");
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("nope1.png"), std::string::npos);
    EXPECT_NE(msg.find("nope2.png"), std::string::npos);
  }
}

TEST_F(ManifestTest, SizeMismatchAndDuplicateIdsRejected) {
  write_file(dir_ / "m.json",
             manifest_json(R"({"id": "b", "image": "img/b.png", "width": 41, "height": 30, "objects": []})"));
  EXPECT_THROW(load_manifest(dir_ / "m.json"), DataError);
  write_file(dir_ / "m.json",
             manifest_json(R"({"id": "b", "image": "img/b.png", "width": 40, "height": 30, "objects": []},
                              {"id": "b", "image": "img/b.png", "width": 40, "height": 30, "objects": []})"));
  EXPECT_THROW(load_manifest(dir_ / "m.json"), DataError);
}

TEST_F(ManifestTest, LoadDocumentReadsPixels) {
  write_file(dir_ / "m.json",
             manifest_json(R"({"id": "b", "image": "img/b.png", "width": 40, "height": 30,
               "objects": [{"label": "equation", "box": [1, 1, 5, 5]}]})"));
  const DatasetManifest m = load_manifest(dir_ / "m.json");
  const AnnotatedDocument doc = load_document(m, 0);
  EXPECT_EQ(doc.id, "b");
  EXPECT_EQ(doc.image.width(), 40);
  ASSERT_EQ(doc.annotations.size(), 1u);
  EXPECT_EQ(doc.annotations[0].label, 2);
}

class VocTest : public ::testing::Test {
 protected:
  VocTest() : dir_("voc") { write_png(dir_ / "p1.png", DocumentImage(100, 80)); }
  void write_xml(const std::string& name, const std::string& cls, const std::string& extra = "") {
    write_file(dir_ / name, "<annotation><filename>p1.png</filename><size><width>100</width>"
                            "<height>80</height><depth>3</depth></size><object><name>" +
                                cls +
                                "</name><bndbox><xmin>10</xmin><ymin>12</ymin><xmax>50</xmax>"
                                "<ymax>40</ymax></bndbox></object>" +
                                extra + "</annotation>");
  }
  testing::TempDir dir_;
};

TEST_F(VocTest, SingleTableObject) {
  write_xml("p1.xml", "table");
  const DatasetManifest m = import_voc_xml(dir_.path());
  ASSERT_EQ(m.entries.size(), 1u);
  ASSERT_EQ(m.entries[0].objects.size(), 1u);
  EXPECT_EQ(m.entries[0].id, "p1");
  EXPECT_EQ(m.entries[0].objects[0].box, (Box{10, 12, 50, 40}));
  EXPECT_EQ(m.labels.name(m.entries[0].objects[0].label), "table");
}

TEST_F(VocTest, UnknownClassIsListed) {
  write_xml("p1.xml", "chart");
  try {
    import_voc_xml(dir_.path());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("'chart' in p1.xml"), std::string::npos) << e.what();
  }
}

TEST_F(VocTest, MalformedXmlNamesFile) {
  write_file(dir_ / "broken.xml", "<annotation><filename>p1.png</filename>");
  try {
    import_voc_xml(dir_.path());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("broken.xml"), std::string::npos);
  }
}

TEST_F(VocTest, ExportImportPreservesBoxesExactly) {
  std::mt19937_64 rng(3);
  DatasetManifest m;
  m.name = "voc";
  m.labels = LabelSet::document_objects();
  m.base_dir = dir_.path();
  ManifestEntry e{"p1", "p1.png", 100, 80, {}};
  for (int i = 0; i < 20; ++i) {
    Box b = testing::random_box(rng, 50.0, 0.5, 29.0);
    e.objects.push_back({b, i % 3});
  }
  m.entries.push_back(e);
  export_voc_xml(m, dir_ / "out");
  std::filesystem::copy_file(dir_ / "p1.png", dir_ / "out/p1.png");
  const DatasetManifest back = import_voc_xml(dir_ / "out");
  ASSERT_EQ(back.entries.size(), 1u);
  EXPECT_EQ(back.entries[0].objects, e.objects);
}

DatasetManifest numbered(int n) {
  DatasetManifest m;
  m.name = "n";
  m.labels = LabelSet::document_objects();
  for (int i = 0; i < n; ++i) m.entries.push_back({"e" + std::to_string(i), "x.png", 1, 1, {}});
  return m;
}

TEST(SplitTest, SixFourPartition) {
  const auto [train, test] = split(numbered(10), 0.6, 42);
  EXPECT_EQ(train.entries.size(), 6u);
  EXPECT_EQ(test.entries.size(), 4u);
  EXPECT_EQ(train.split, Split::kTrain);
  EXPECT_EQ(test.split, Split::kTest);
}

TEST(SplitTest, DeterministicDisjointExhaustive) {
  const DatasetManifest m = numbered(57);
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto a = split(m, 0.3, seed);
    const auto b = split(m, 0.3, seed);
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.second, b.second);
    std::multiset<std::string> ids;
    for (const auto& e : a.first.entries) ids.insert(e.id);
    for (const auto& e : a.second.entries) ids.insert(e.id);
    std::multiset<std::string> want;
    for (const auto& e : m.entries) want.insert(e.id);
    EXPECT_EQ(ids, want);
  }
  EXPECT_NE(split(m, 0.3, 1).first.entries, split(m, 0.3, 2).first.entries);
  EXPECT_THROW(split(m, 0.0, 1), ConfigError);
  EXPECT_THROW(split(m, 1.0, 1), ConfigError);
}

bool is_ink(Rgb c) { return !(c == kWhite); }

// Every object's ink lies inside its box (nothing else inks a 4-px ring
// around it), and each box edge is within 2 px of the extremal ink.
void expect_tight_boxes(const AnnotatedDocument& doc) {
  const DocumentImage& img = doc.image;
  for (const auto& a : doc.annotations) {
    const int x0 = static_cast<int>(a.box.x_min), y0 = static_cast<int>(a.box.y_min);
    const int x1 = static_cast<int>(a.box.x_max), y1 = static_cast<int>(a.box.y_max);
    int ix0 = x1, iy0 = y1, ix1 = x0 - 1, iy1 = y0 - 1;
    for (int y = y0 - 4; y < y1 + 4; ++y) {
      for (int x = x0 - 4; x < x1 + 4; ++x) {
        if (!img.contains(x, y) || !is_ink(img.at(x, y))) continue;
        const bool inside = x >= x0 && x < x1 && y >= y0 && y < y1;
        ASSERT_TRUE(inside) << doc.id << ": ink at (" << x << "," << y << ") outside box";
        ix0 = std::min(ix0, x);
        iy0 = std::min(iy0, y);
        ix1 = std::max(ix1, x);
        iy1 = std::max(iy1, y);
      }
    }
    ASSERT_LE(ix0, ix1) << doc.id << ": box without ink";
    EXPECT_LE(ix0 - x0, 2);
    EXPECT_LE(iy0 - y0, 2);
    EXPECT_LE(x1 - (ix1 + 1), 2);
    EXPECT_LE(y1 - (iy1 + 1), 2);
  }
}

TEST(SynthTest, SameSeedAndIndexIsByteIdentical) {
  SynthConfig cfg;
  cfg.seed = 11;
  const AnnotatedDocument a = synth_page(cfg, 5);
  const AnnotatedDocument b = synth_page(cfg, 5);
  EXPECT_EQ(a.image, b.image);
  EXPECT_EQ(a.annotations, b.annotations);
  EXPECT_NE(synth_page(cfg, 6).image, a.image);
}

TEST(SynthTest, ZeroObjectsGivesPlainText) {
  SynthConfig cfg;
  cfg.tables = cfg.figures = cfg.equations = {0, 0};
  const AnnotatedDocument doc = synth_page(cfg, 0);
  EXPECT_TRUE(doc.annotations.empty());
  int ink = 0;
  for (int y = 0; y < doc.image.height(); ++y)
    for (int x = 0; x < doc.image.width(); ++x) ink += is_ink(doc.image.at(x, y));
  EXPECT_GT(ink, 10000);
}

TEST(SynthTest, GroundTruthBoxesPassInkExtentOracle) {
  for (const SynthConfig& base : {SynthConfig{}, SynthConfig::style_shifted()}) {
    SynthConfig cfg = base;
    cfg.seed = 2024;
    for (std::uint64_t i = 0; i < 40; ++i) {
      const AnnotatedDocument doc = synth_page(cfg, i);
      expect_tight_boxes(doc);
      for (std::size_t a = 0; a < doc.annotations.size(); ++a)
        for (std::size_t b = a + 1; b < doc.annotations.size(); ++b)
          EXPECT_EQ(geometry::iou(doc.annotations[a].box, doc.annotations[b].box), 0.0);
    }
  }
}

TEST(SynthTest, MinimumCountsAreHonoured) {
  SynthConfig cfg;
  cfg.tables = {2, 2};
  cfg.figures = {1, 1};
  cfg.equations = {3, 3};
  for (std::uint64_t i = 0; i < 10; ++i) {
    const AnnotatedDocument doc = synth_page(cfg, i);
    int counts[3] = {0, 0, 0};
    for (const auto& a : doc.annotations) ++counts[a.label];
    EXPECT_EQ(counts[0], 2);
    EXPECT_EQ(counts[1], 1);
    EXPECT_EQ(counts[2], 3);
  }
}

TEST(SynthTest, PageTooSmallIsAnError) {
  SynthConfig cfg;
  cfg.page_width = 64;
  cfg.page_height = 64;
  cfg.tables = {3, 3};
  EXPECT_THROW(synth_page(cfg, 0), ConfigError);
}

TEST(SynthTest, ConfigValidation) {
  SynthConfig cfg;
  cfg.table_mix = {0.5, 0.5, 0.5};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SynthConfig{};
  cfg.figures = {3, 1};
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = SynthConfig{};
  cfg.equations = {-1, 2};
  EXPECT_THROW(cfg.validate(), ConfigError);
  EXPECT_NO_THROW(SynthConfig::style_shifted().validate());
}

TEST(RenderTest, NoDetectionsLeavesImageUnchanged) {
  AnnotatedDocument doc{"d", checker(50, 40), {}};
  EXPECT_EQ(render(doc, {}, LabelSet::document_objects()), doc.image);
}

TEST(RenderTest, TableOutlineOccupiesExactlyTheBorderBand) {
  AnnotatedDocument doc{"d", DocumentImage(60, 50), {}};
  const std::vector<RenderItem> items{{{10, 20, 40, 45}, 0, std::nullopt}};
  const DocumentImage out = render(doc.image, items, LabelSet::document_objects());
  for (int y = 0; y < 50; ++y) {
    for (int x = 0; x < 60; ++x) {
      const bool in = x >= 10 && x <= 39 && y >= 20 && y <= 44;
      const bool band = in && (x < 13 || x > 36 || y < 23 || y > 41);
      EXPECT_EQ(out.at(x, y), band ? (Rgb{0, 0, 255}) : kWhite) << x << "," << y;
    }
  }
}

TEST(RenderTest, HigherScoreDrawnLast) {
  AnnotatedDocument doc{"d", DocumentImage(80, 80), {}};
  // Figure and equation share the pixel (30, 30) on their top-left corners.
  const std::vector<geometry::ScoredBox> dets{{{30, 30, 70, 70}, 2, 0.9},
                                              {{30, 30, 60, 60}, 1, 0.4}};
  const LabelSet labels = LabelSet::document_objects();
  const DocumentImage out = render(doc, dets, labels);
  EXPECT_EQ(out.at(31, 31), (Rgb{255, 0, 0}));
  EXPECT_EQ(out.at(58, 40), (Rgb{0, 255, 0}));  // right edge of the figure only
  // Reversed scores flip the shared corner.
  const std::vector<geometry::ScoredBox> flipped{{{30, 30, 70, 70}, 2, 0.3},
                                                 {{30, 30, 60, 60}, 1, 0.4}};
  EXPECT_EQ(render(doc, flipped, labels).at(31, 31), (Rgb{0, 255, 0}));
}

TEST(RenderTest, ScoreIsPrintedAboveTheBox) {
  AnnotatedDocument doc{"d", DocumentImage(80, 80), {}};
  const std::vector<geometry::ScoredBox> dets{{{20, 30, 70, 70}, 0, 0.87}};
  const DocumentImage out = render(doc, dets, LabelSet::document_objects());
  int above = 0;
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x < 80; ++x) above += out.at(x, y) == (Rgb{0, 0, 255});
  EXPECT_GT(above, 20);
}

}  // namespace
}  // namespace docdet::data

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

// docdet command-line front end.
//
//   docdet synth     --out DIR --count N [--style shifted]
//   docdet train     --train M.json --out model.ckpt
//   docdet finetune  --checkpoint pre.ckpt --train M.json --out model.ckpt
//   docdet detect    --model model.ckpt --manifest M.json --out preds.jsonl
//   docdet evaluate  --gt M.json --pred preds.jsonl [--iou 0.5]
//   docdet sweep     --gt M.json --pred preds.jsonl --iou 0.5,0.6,0.7,0.8
//   docdet render    --manifest M.json [--pred preds.jsonl] --out-dir DIR
//   docdet gradcheck
//
// Every subcommand takes --config FILE with "key = value" lines (keys are
// long flag names); flags on the command line win. Exit codes: 0 success,
// 1 usage or configuration error, 2 data error, 3 failed gradient check.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "docdet/cli/pipeline.h"
#include "docdet/data/png_io.h"
#include "docdet/data/render.h"
#include "docdet/detector/serialize.h"
#include "docdet/detector/train.h"
#include "docdet/error.h"
#include "docdet/eval/predictions.h"
#include "docdet/eval/report.h"
#include "docdet/gradcheck/suites.h"
#include "docdet/util/atomic_file.h"
#include "docdet/util/kv_config.h"
#include "docdet/util/parallel.h"

namespace docdet::cli {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitGradcheck = 3;

struct HyperFlags {
  int epochs = 30;
  double lr = 0.001;
  double momentum = 0.0;
  double decay_factor = 0.1;
  int decay_every = 5;
  int batch_size = 4;
  std::uint64_t seed = 1;
  std::string checkpoint_dir;
  std::string loss_trace;
  long max_steps = 0;

  void add(CLI::App* app) {
    app->add_option("--epochs", epochs, "Training epochs");
    app->add_option("--lr", lr, "Initial learning rate");
    app->add_option("--momentum", momentum, "Heavy-ball momentum (0 = plain SGD)");
    app->add_option("--decay-factor", decay_factor, "Learning-rate decay factor");
    app->add_option("--decay-every", decay_every, "Decay the learning rate every N epochs");
    app->add_option("--batch-size", batch_size, "Images per SGD step");
    app->add_option("--seed", seed, "Seed for shuffling and sampling");
    app->add_option("--checkpoint-dir", checkpoint_dir, "Write epoch_NNN.ckpt here after every epoch");
    app->add_option("--loss-trace", loss_trace, "CSV loss trace path");
    app->add_option("--max-steps", max_steps, "Stop after this many SGD steps (0 = no limit)");
  }

  detector::TrainOptions options() const {
    detector::TrainOptions o;
    o.epochs = epochs;
    o.hp.learning_rate = lr;
    o.hp.momentum = momentum;
    o.hp.decay_factor = decay_factor;
    o.hp.decay_every_epochs = decay_every;
    o.hp.batch_size = batch_size;
    o.seed = seed;
    o.checkpoint_dir = checkpoint_dir;
    o.loss_trace = loss_trace;
    o.max_steps = max_steps;
    o.on_epoch = [](const detector::EpochRecord& r) {
      std::printf("epoch %d lr %.6g steps %ld rpn_cls %.5f rpn_reg %.5f head_cls %.5f head_reg %.5f total %.5f\n",
                  r.epoch, r.lr, r.steps, r.loss.rpn_cls, r.loss.rpn_reg, r.loss.head_cls,
                  r.loss.head_reg, r.loss.total());
      std::fflush(stdout);
    };
    return o;
  }
};

struct Flags {
  std::string config;
  int jobs = 1;

  // synth
  std::string out_dir;
  int count = 100;
  std::uint64_t synth_seed = 1;
  std::uint64_t first_index = 0;
  std::string style = "default";
  std::string name = "synth";
  std::string split = "train";

  // train / finetune
  std::string train_manifest;
  std::string model_out;
  std::string checkpoint;
  std::string backbone = "tiny";
  std::string roi = "align";
  int input_size = 600;
  std::uint64_t init_seed = 1;
  HyperFlags hyper;

  // detect
  std::string model;
  std::string manifest;
  std::string pred_out;
  double detect_threshold = 0.05;
  double nms = 0.3;
  int max_detections = 100;
  std::string render_dir;
  double render_min_score = 0.5;

  // evaluate / sweep
  std::string gt;
  std::string pred;
  double iou = 0.5;
  std::string iou_list = "0.5,0.6,0.7,0.8";
  double score_threshold = 0.5;
  std::string report_out;

  // gradcheck
  std::uint64_t gradcheck_seed = 7;
  std::string suite = "all";
};

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + item + "' in list '" + s + "'");
    }
  }
  if (out.empty()) throw ConfigError("empty threshold list");
  return out;
}

data::SynthConfig synth_style(const std::string& style, std::uint64_t seed) {
  data::SynthConfig c;
  if (style == "shifted") {
    c = data::SynthConfig::style_shifted();
  } else if (style != "default") {
    throw ConfigError("--style must be 'default' or 'shifted', got '" + style + "'");
  }
  c.seed = seed;
  return c;
}

int run_synth(const Flags& f) {
  const data::SynthConfig cfg = synth_style(f.style, f.synth_seed);
  if (f.count < 1) throw ConfigError("--count must be >= 1");
  const data::DatasetManifest m = write_synthetic_dataset(
      cfg, f.first_index, f.count, f.out_dir, f.name, data::parse_split(f.split), f.jobs);
  std::printf("wrote %zu pages with %zu objects to %s\n", m.entries.size(), m.object_count(),
              (fs::path(f.out_dir) / (f.name + ".json")).c_str());
  return kExitOk;
}

std::vector<data::AnnotatedDocument> load_training_set(const Flags& f, geometry::LabelSet* labels) {
  data::LoadReport report;
  data::DatasetManifest m = data::load_manifest(f.train_manifest, &report);
  data::validate_manifest(m, &report);
  if (report.clipped_boxes > 0) {
    std::fprintf(stderr, "note: %zu boxes clipped to their page\n", report.clipped_boxes);
  }
  *labels = m.labels;
  return load_documents(m, f.jobs);
}

int run_train(const Flags& f) {
  geometry::LabelSet labels;
  const auto docs = load_training_set(f, &labels);
  detector::DetectorConfig cfg;
  cfg.backbone = detector::BackboneConfig::from_preset(f.backbone);
  cfg.roi.mode = detector::parse_roi_mode(f.roi);
  cfg.input_size = f.input_size;
  cfg.labels = labels;
  detector::DetectorModel model = detector::create_model(cfg, f.init_seed);
  std::printf("model: %zu parameters, %zu training pages\n", model.parameter_count(), docs.size());
  detector::train(model, docs, f.hyper.options());
  detector::save_model(f.model_out, model);
  std::printf("saved %s\n", f.model_out.c_str());
  return kExitOk;
}

int run_finetune(const Flags& f) {
  geometry::LabelSet labels;
  const auto docs = load_training_set(f, &labels);
  const detector::TrainOptions opts = f.hyper.options();
  const detector::FineTuneResult r = detector::fine_tune(f.checkpoint, labels, docs, opts);
  detector::save_model(f.model_out, r.model);
  std::printf("saved %s\n", f.model_out.c_str());
  return kExitOk;
}

int run_detect(const Flags& f) {
  const detector::DetectorModel model = detector::load_model(f.model);
  data::DatasetManifest m = data::load_manifest(f.manifest);
  data::validate_manifest(m);
  const auto docs = load_documents(m, f.jobs);
  detector::DetectOptions opts;
  opts.score_threshold = f.detect_threshold;
  opts.nms_threshold = f.nms;
  opts.max_detections = f.max_detections;
  const auto dets = detect_all(model, docs, opts, f.jobs);
  const auto preds = to_predictions(docs, dets, model.config.labels);
  eval::write_predictions(f.pred_out, preds);
  std::printf("wrote %zu detections for %zu pages to %s\n", preds.size(), docs.size(),
              f.pred_out.c_str());
  if (!f.render_dir.empty()) {
    fs::create_directories(f.render_dir);
    util::parallel_for(docs.size(), f.jobs, [&](std::size_t i) {
      std::vector<geometry::ScoredBox> shown;
      for (const auto& d : dets[i]) {
        if (d.score >= f.render_min_score) shown.push_back(d);
      }
      data::write_png(fs::path(f.render_dir) / (docs[i].id + ".png"),
                      data::render(docs[i], shown, model.config.labels));
    });
    std::printf("rendered %zu pages to %s\n", docs.size(), f.render_dir.c_str());
  }
  return kExitOk;
}

struct Scored {
  eval::ResolvedSet set;
  geometry::LabelSet labels;
};

Scored load_scored(const Flags& f) {
  data::DatasetManifest gt = data::load_manifest(f.gt);
  const auto preds = eval::read_predictions(f.pred);
  return {eval::resolve(preds, gt), gt.labels};
}

eval::EvalOptions eval_options(const Flags& f, double iou) {
  eval::EvalOptions o;
  o.iou_threshold = iou;
  o.score_threshold = f.score_threshold;
  o.jobs = f.jobs;
  return o;
}

int run_evaluate(const Flags& f) {
  const Scored s = load_scored(f);
  const eval::EvalReport r = eval::evaluate(s.set.preds, s.set.gts, s.labels, eval_options(f, f.iou));
  std::fputs(eval::format_report_table(r).c_str(), stdout);
  if (!f.report_out.empty()) {
    util::write_text_atomically(f.report_out, eval::format_report_csv(std::span(&r, 1)));
  }
  std::printf("%s\n", eval::summary_line(r).c_str());
  return kExitOk;
}

int run_sweep(const Flags& f) {
  const std::vector<double> thresholds = parse_list(f.iou_list);
  const Scored s = load_scored(f);
  const auto reports =
      eval::threshold_sweep(s.set.preds, s.set.gts, s.labels, thresholds, eval_options(f, thresholds[0]));
  for (const auto& r : reports) std::printf("%s\n", eval::summary_line(r).c_str());
  if (!f.report_out.empty()) util::write_text_atomically(f.report_out, eval::format_sweep_csv(reports));
  return kExitOk;
}

int run_render(const Flags& f) {
  data::DatasetManifest m = data::load_manifest(f.manifest);
  data::validate_manifest(m);
  std::map<std::string, std::vector<geometry::ScoredBox>> by_image;
  const bool have_preds = !f.pred.empty();
  if (have_preds) {
    const auto preds = eval::read_predictions(f.pred);
    const eval::ResolvedSet r = eval::resolve(preds, m);
    for (const auto& d : r.preds) {
      if (d.score >= f.render_min_score) by_image[m.entries[d.image].id].push_back({d.box, d.label, d.score});
    }
  }
  fs::create_directories(f.out_dir);
  util::parallel_for(m.entries.size(), f.jobs, [&](std::size_t i) {
    const data::AnnotatedDocument doc = data::load_document(m, i);
    const data::DocumentImage out = have_preds ? data::render(doc, by_image[doc.id], m.labels)
                                               : data::render_annotations(doc, m.labels);
    data::write_png(fs::path(f.out_dir) / (doc.id + ".png"), out);
  });
  std::printf("rendered %zu pages to %s\n", m.entries.size(), f.out_dir.c_str());
  return kExitOk;
}

int run_gradcheck(const Flags& f) {
  std::vector<gradcheck::SuiteResult> results;
  if (f.suite == "all") {
    results = gradcheck::run_all(f.gradcheck_seed);
  } else {
    results.push_back(gradcheck::run_suite(f.suite, f.gradcheck_seed));
  }
  bool ok = true;
  for (const auto& r : results) {
    std::printf("%-24s max_rel_err %.3e  %s  (worst %s)\n", r.name.c_str(), r.max_relative_error,
                r.passed() ? "PASS" : "FAIL", r.worst.c_str());
    ok = ok && r.passed();
  }
  std::printf("gradcheck %s (tolerance %.0e)\n", ok ? "passed" : "FAILED", gradcheck::kTolerance);
  return ok ? kExitOk : kExitGradcheck;
}

// Long names of options the user may set from a config file.
std::string option_key(const CLI::Option* o) {
  return o->get_lnames().empty() ? std::string() : o->get_lnames().front();
}

void echo_config(const CLI::App* sub) {
  std::printf("# docdet %s resolved config\n", sub->get_name().c_str());
  for (const CLI::Option* o : sub->get_options()) {
    const std::string key = option_key(o);
    if (key.empty() || key == "help" || key == "config") continue;
    const std::string value = o->count() > 0 ? o->as<std::string>() : o->get_default_str();
    std::printf("%s = %s\n", key.c_str(), value.c_str());
  }
  std::fflush(stdout);
}

// Turns "key = value" lines into --key=value arguments placed before the
// user's own, so later command-line flags override them.
std::vector<std::string> inject_config(CLI::App& app, std::vector<std::string> args) {
  if (args.size() < 2) return args;
  CLI::App* sub = nullptr;
  try {
    sub = app.get_subcommand(args[1]);
  } catch (const CLI::OptionNotFound&) {
    return args;
  }
  std::string path;
  for (std::size_t i = 2; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return args;
  const util::KeyValues kv = util::load_key_values(path);
  std::vector<std::string> injected;
  for (const auto& [key, value] : kv) {
    const CLI::Option* o = sub->get_option_no_throw("--" + key);
    if (o == nullptr || key == "config" || key == "help") {
      throw ConfigError(path + ": '" + key + "' is not an option of 'docdet " + args[1] + "'");
    }
    injected.push_back("--" + key + "=" + value);
  }
  args.insert(args.begin() + 2, injected.begin(), injected.end());
  return args;
}

int run(int argc, char** argv) {
  Flags f;
  CLI::App app{"docdet: table, figure and equation detection in document images"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  auto common = [&f](CLI::App* s) {
    s->add_option("--config", f.config, "Key/value file of flag defaults");
    s->add_option("--jobs", f.jobs, "Worker threads for per-image work")->check(CLI::PositiveNumber);
  };

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic page corpus with a manifest");
  common(synth);
  synth->add_option("--out", f.out_dir, "Output directory")->required();
  synth->add_option("--count", f.count, "Number of pages");
  synth->add_option("--seed", f.synth_seed, "Generator seed");
  synth->add_option("--first-index", f.first_index, "Index of the first page");
  synth->add_option("--style", f.style, "default or shifted");
  synth->add_option("--name", f.name, "Dataset name; the manifest is <name>.json");
  synth->add_option("--split", f.split, "train or test");

  auto model_flags = [&f](CLI::App* s) {
    s->add_option("--train", f.train_manifest, "Training manifest")->required();
    s->add_option("--out", f.model_out, "Output checkpoint")->required();
    f.hyper.add(s);
  };
  CLI::App* train = app.add_subcommand("train", "Train a detector from scratch");
  common(train);
  model_flags(train);
  train->add_option("--backbone", f.backbone, "Backbone preset: tiny or small");
  train->add_option("--roi", f.roi, "RoI feature extraction: align or pool");
  train->add_option("--input-size", f.input_size, "Square input size in pixels");
  train->add_option("--init-seed", f.init_seed, "Seed for weight initialisation");

  CLI::App* finetune = app.add_subcommand("finetune", "Continue training from a checkpoint");
  common(finetune);
  model_flags(finetune);
  finetune->add_option("--checkpoint", f.checkpoint, "Pretrained checkpoint")->required();

  CLI::App* detect = app.add_subcommand("detect", "Run a trained detector over a manifest");
  common(detect);
  detect->add_option("--model", f.model, "Checkpoint")->required();
  detect->add_option("--manifest", f.manifest, "Pages to process")->required();
  detect->add_option("--out", f.pred_out, "Predictions (JSON lines)")->required();
  detect->add_option("--score-threshold", f.detect_threshold, "Keep detections scoring above this");
  detect->add_option("--nms", f.nms, "Per-class NMS IoU threshold");
  detect->add_option("--max-detections", f.max_detections, "Detections kept per page");
  detect->add_option("--render-dir", f.render_dir, "Also write annotated pages here");
  detect->add_option("--render-min-score", f.render_min_score, "Smallest score drawn when rendering");

  auto scoring = [&f](CLI::App* s) {
    s->add_option("--gt", f.gt, "Ground-truth manifest")->required();
    s->add_option("--pred", f.pred, "Predictions (JSON lines)")->required();
    s->add_option("--score-threshold", f.score_threshold, "Operating point for precision/recall/F1");
    s->add_option("--out", f.report_out, "CSV report path");
  };
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score predictions at one IoU threshold");
  common(evaluate);
  scoring(evaluate);
  evaluate->add_option("--iou", f.iou, "IoU threshold for a true positive");

  CLI::App* sweep = app.add_subcommand("sweep", "Score predictions over several IoU thresholds");
  common(sweep);
  scoring(sweep);
  sweep->add_option("--iou", f.iou_list, "Comma-separated ascending thresholds");

  CLI::App* render = app.add_subcommand("render", "Draw annotations or predictions onto pages");
  common(render);
  render->add_option("--manifest", f.manifest, "Pages and ground truth")->required();
  render->add_option("--pred", f.pred, "Predictions to draw instead of the ground truth");
  render->add_option("--out-dir", f.out_dir, "Output directory")->required();
  render->add_option("--min-score", f.render_min_score, "Smallest prediction score drawn");

  CLI::App* grad = app.add_subcommand("gradcheck", "Finite-difference checks of every gradient");
  common(grad);
  grad->add_option("--seed", f.gradcheck_seed, "Seed for the random test points");
  grad->add_option("--suite", f.suite, "One suite name, or all");

  try {
    std::vector<std::string> args(argv, argv + argc);
    args = inject_config(app, std::move(args));
    std::vector<const char*> cargs;
    for (const std::string& a : args) cargs.push_back(a.c_str());
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "docdet: %s\n", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    std::fprintf(stderr, "docdet: %s\n", e.what());
    return kExitData;
  }

  CLI::App* sub = app.get_subcommands().front();
  echo_config(sub);
  try {
    if (sub == synth) return run_synth(f);
    if (sub == train) return run_train(f);
    if (sub == finetune) return run_finetune(f);
    if (sub == detect) return run_detect(f);
    if (sub == evaluate) return run_evaluate(f);
    if (sub == sweep) return run_sweep(f);
    if (sub == render) return run_render(f);
    return run_gradcheck(f);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "docdet %s: %s\n", sub->get_name().c_str(), e.what());
    return kExitUsage;
  } catch (const ShapeError& e) {
    std::fprintf(stderr, "docdet %s: %s\n", sub->get_name().c_str(), e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    // DataError, NumericError, filesystem and I/O failures.
    std::fprintf(stderr, "docdet %s: %s\n", sub->get_name().c_str(), e.what());
    return kExitData;
  }
}

}  // namespace
}  // namespace docdet::cli

int main(int argc, char** argv) { return docdet::cli::run(argc, argv); }

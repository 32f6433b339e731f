/*
 * Copyright 2026 The CovEval Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// coveval: evaluate detector output against ground truth under the
// covering standard and the paper-style ranked-precision mAP, synthesize
// fractal benchmark scenes, and render reports.
//
// Exit codes: 0 success, 1 input/config error, 2 empty evaluation set.

#include <cstdio>
#include <filesystem>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "coveval/datasets.hpp"
#include "coveval/errors.hpp"
#include "coveval/evaluation.hpp"
#include "coveval/fractal.hpp"
#include "coveval/log.hpp"
#include "coveval/metrics.hpp"
#include "coveval/report_io.hpp"
#include "coveval/rng.hpp"
#include "coveval/synth.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitEmpty = 2;

struct EvaluateOptions {
  std::string gt_path;
  std::string det_path;
  std::string out_path;
  std::string standard = "both";
  double overlap_threshold = 0.55;
  double confidence_threshold = 0.5;
  std::vector<double> mu_list{0.5, 0.8};
  std::vector<std::string> mu_presets;
  std::uint64_t seed = 0;
  int threads = 1;
  double rank_mu = 0.8;  // compare only
};

struct SynthOptions {
  std::string out_dir;
  int count = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  // Curve.
  int depth = 8;
  int points_per_segment = 1;
  std::string kind = "random";
  double t_lo = 0.4, t_hi = 0.6;
  double h_lo = -0.35, h_hi = 0.35;
  // Boxes.
  double box_size = 0.125;
  double stride = 0.125;
  std::string class_id = "crack";
  // Detector model.
  double scale_jitter = 1.0;
  double position_jitter = 0.0;
  int duplication = 1;
  double drop_out = 0.0;
  int false_alarms = 0;
  double confidence_lo = 0.5;
  double confidence_hi = 1.0;
};

void add_eval_flags(CLI::App* cmd, EvaluateOptions& opt) {
  cmd->add_option("--gt", opt.gt_path,
                  "Ground-truth manifest (file or directory with manifest.json)")
      ->required();
  cmd->add_option("--det", opt.det_path,
                  "Detections (directory of <class>.txt, unified .json, or "
                  "scene manifest)")
      ->required();
  cmd->add_option("--out", opt.out_path, "Output path");
  cmd->add_option("--standard", opt.standard,
                  "Evaluation standard: both|map|coveval")->capture_default_str();
  cmd->add_option("--overlap-threshold", opt.overlap_threshold,
                  "Overlap threshold for both standards")->capture_default_str();
  cmd->add_option("--confidence-threshold", opt.confidence_threshold,
                  "Confidence cut (covering standard only)")->capture_default_str();
  cmd->add_option("--mu", opt.mu_list, "F_ext trade-off factors")
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--mu-preset", opt.mu_presets,
                  "Scenario presets appended to --mu (avoid-false-alarm, "
                  "balanced, avoid-missing, strongly-avoid-missing)")
      ->delimiter(',');
  cmd->add_option("--seed", opt.seed, "Seed echoed into the report")->capture_default_str();
  cmd->add_option("--threads", opt.threads, "Worker threads")->capture_default_str();
}

coveval::RunConfig make_run_config(const EvaluateOptions& opt) {
  coveval::RunConfig config;
  config.overlap_threshold = opt.overlap_threshold;
  config.confidence_threshold = opt.confidence_threshold;
  config.mu_list = opt.mu_list;
  for (const auto& preset : opt.mu_presets) {
    const double mu = coveval::mu_preset(preset);
    if (std::find(config.mu_list.begin(), config.mu_list.end(), mu) ==
        config.mu_list.end()) {
      config.mu_list.push_back(mu);
    }
  }
  config.standard = coveval::RunConfig::standard_from_name(opt.standard);
  config.threads = opt.threads;
  config.seed = opt.seed;
  config.validate();
  return config;
}

/// Loads inputs, runs validation (warnings to the log) and evaluates.
/// Returns kExitEmpty before scoring when there is nothing to evaluate.
int run_evaluation(const EvaluateOptions& opt, coveval::EvalReport& report) {
  const coveval::RunConfig config = make_run_config(opt);

  coveval::Dataset dataset = coveval::load_dataset(opt.gt_path);
  std::vector<coveval::Detection> detections =
      coveval::load_detections(opt.det_path, dataset.manifest);

  const coveval::ValidationReport validation = coveval::validate_inputs(
      dataset.manifest, dataset.ground_truths, detections);
  for (const auto& warning : validation.unknown_image_ids) {
    coveval::log_warn("detection references unknown image_id '" + warning +
                      "'");
  }
  for (const auto& warning : validation.unknown_classes) {
    coveval::log_warn("detection references unknown class '" + warning + "'");
  }
  for (const auto& warning : validation.out_of_extent) {
    coveval::log_warn(warning);
  }
  for (const auto& warning : validation.duplicate_gt) {
    coveval::log_warn(warning);
  }

  if (dataset.manifest.images.empty() || dataset.manifest.classes.empty() ||
      (dataset.ground_truths.empty() && detections.empty())) {
    std::cerr << "coveval: empty evaluation set (no images, classes, boxes)\n";
    return kExitEmpty;
  }

  report = coveval::evaluate_detections(dataset.ground_truths, detections,
                                        dataset.manifest.classes, config);
  report.gt_path = opt.gt_path;
  report.det_path = opt.det_path;
  return kExitOk;
}

int cmd_evaluate(const EvaluateOptions& opt) {
  coveval::EvalReport report;
  const int status = run_evaluation(opt, report);
  if (status != kExitOk) return status;

  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path);
    if (!out) {
      std::cerr << "coveval: cannot write " << opt.out_path << "\n";
      return kExitError;
    }
    out << coveval::report_to_json(report);
  }
  std::cout << coveval::render_report_table(report);
  return kExitOk;
}

int cmd_compare(const EvaluateOptions& opt) {
  EvaluateOptions both = opt;
  both.standard = "both";
  coveval::EvalReport report;
  const int status = run_evaluation(both, report);
  if (status != kExitOk) return status;

  const std::string csv = coveval::render_compare_csv(report, opt.rank_mu);
  if (!opt.out_path.empty()) {
    std::ofstream out(opt.out_path);
    if (!out) {
      std::cerr << "coveval: cannot write " << opt.out_path << "\n";
      return kExitError;
    }
    out << csv;
  }
  std::cout << csv;
  return kExitOk;
}

int cmd_synth(const SynthOptions& opt) {
  if (opt.count < 1) {
    throw coveval::config_error("--count must be >= 1");
  }
  coveval::TransformParams params;
  params.kind = opt.kind == "deterministic"
                    ? coveval::TransformParams::Kind::kDeterministic
                    : coveval::TransformParams::Kind::kRandom;
  if (opt.kind != "deterministic" && opt.kind != "random") {
    throw coveval::config_error("--kind must be 'random' or 'deterministic'");
  }
  params.points_per_segment = opt.points_per_segment;
  params.t_lo = opt.t_lo;
  params.t_hi = opt.t_hi;
  params.h_lo = opt.h_lo;
  params.h_hi = opt.h_hi;
  params.validate();

  coveval::DetectorModel model;
  model.scale_lo = opt.scale_jitter;
  model.scale_hi = opt.scale_jitter;
  model.position_jitter = opt.position_jitter;
  model.duplication = opt.duplication;
  model.drop_out = opt.drop_out;
  model.false_alarms = opt.false_alarms;
  model.confidence_lo = opt.confidence_lo;
  model.confidence_hi = opt.confidence_hi;
  model.validate();

  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path out_dir(opt.out_dir);

  std::vector<std::optional<coveval::SyntheticScene>> scenes(
      static_cast<std::size_t>(opt.count));
  auto build_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      // Independent child streams per scene: curve and annotations each
      // get their own derived seed, so scene i is identical no matter
      // how many scenes or threads are in flight.
      const std::uint64_t scene_seed = coveval::derive_seed(opt.seed, i);
      const std::uint64_t curve_seed = coveval::derive_seed(scene_seed, 1);
      const std::uint64_t annot_seed = coveval::derive_seed(scene_seed, 2);
      char name[32];
      std::snprintf(name, sizeof(name), "scene_%04zu", i);
      const coveval::PolyCurve curve =
          coveval::generate_curve(params, opt.depth, curve_seed);
      scenes[i] = coveval::synthesize_annotations(curve, opt.box_size,
                                                  opt.stride, model, annot_seed,
                                                  name, opt.class_id);
    }
  };

  const auto jobs = scenes.size();
  const auto workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(1, opt.threads)),
                            jobs);
  if (workers <= 1) {
    build_range(0, jobs);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back(build_range, jobs * w / workers,
                        jobs * (w + 1) / workers);
    }
    for (auto& worker : pool) worker.join();
  }

  coveval::Manifest manifest;
  manifest.format = "scene-json";
  manifest.classes = {opt.class_id};
  for (const auto& slot : scenes) {
    const coveval::SyntheticScene& scene = *slot;
    const std::string file = scene.image_id + ".json";
    coveval::write_scene_file(scene, out_dir / file);
    manifest.images.push_back(coveval::ImageRecord{
        scene.image_id, scene.extent.width(), scene.extent.height(), file});
  }
  coveval::write_manifest(manifest, out_dir / "manifest.json");

  std::cout << "wrote " << scenes.size() << " scenes to " << opt.out_dir
            << "\n";
  return kExitOk;
}

int cmd_report(const std::string& report_path, const std::string& format) {
  std::ifstream in(report_path);
  if (!in) {
    std::cerr << "coveval: cannot open " << report_path << "\n";
    return kExitError;
  }
  const coveval::EvalReport report =
      coveval::report_from_json(in, report_path);
  if (format == "table") {
    std::cout << coveval::render_report_table(report);
  } else if (format == "csv") {
    std::cout << coveval::render_report_csv(report);
  } else {
    throw coveval::config_error("--format must be 'table' or 'csv'");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coveval: covering evaluation toolkit for box detectors"};
  app.require_subcommand(1);

  EvaluateOptions eval_opt;
  CLI::App* evaluate =
      app.add_subcommand("evaluate", "Score detections against ground truth");
  add_eval_flags(evaluate, eval_opt);

  EvaluateOptions compare_opt;
  CLI::App* compare = app.add_subcommand(
      "compare", "Per-class rank comparison between the two standards");
  add_eval_flags(compare, compare_opt);
  compare->add_option("--rank-mu", compare_opt.rank_mu,
                      "mu used for the covering-standard ranking")->capture_default_str();

  SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate fractal scenes with simulated detections");
  synth->add_option("--out", synth_opt.out_dir, "Output directory")->required();
  synth->add_option("--count", synth_opt.count, "Number of scenes")->capture_default_str();
  synth->add_option("--seed", synth_opt.seed, "Master seed")->capture_default_str();
  synth->add_option("--threads", synth_opt.threads, "Worker threads")->capture_default_str();
  synth->add_option("--depth", synth_opt.depth, "Refinement iterations")->capture_default_str();
  synth->add_option("--points-per-segment", synth_opt.points_per_segment,
                    "Nodes inserted per segment per iteration (G)")->capture_default_str();
  synth->add_option("--kind", synth_opt.kind,
                    "Transform kind: random|deterministic")->capture_default_str();
  synth->add_option("--t-lo", synth_opt.t_lo, "Along-segment fraction lower bound")->capture_default_str();
  synth->add_option("--t-hi", synth_opt.t_hi, "Along-segment fraction upper bound")->capture_default_str();
  synth->add_option("--h-lo", synth_opt.h_lo, "Normal offset lower bound")->capture_default_str();
  synth->add_option("--h-hi", synth_opt.h_hi, "Normal offset upper bound")->capture_default_str();
  synth->add_option("--box-size", synth_opt.box_size,
                    "Ground-truth box side length")->capture_default_str();
  synth->add_option("--stride", synth_opt.stride,
                    "Arc-length spacing of box centers")->capture_default_str();
  synth->add_option("--class-id", synth_opt.class_id, "Synthetic class name")->capture_default_str();
  synth->add_option("--scale-jitter", synth_opt.scale_jitter,
                    "Detection side length as a fraction of the box size")->capture_default_str();
  synth->add_option("--position-jitter", synth_opt.position_jitter,
                    "Center jitter as a fraction of the box size")->capture_default_str();
  synth->add_option("--duplication", synth_opt.duplication,
                    "Detections per kept ground truth")->capture_default_str();
  synth->add_option("--drop-out", synth_opt.drop_out,
                    "Probability a ground truth goes undetected")->capture_default_str();
  synth->add_option("--false-alarms", synth_opt.false_alarms,
                    "Spurious detections per scene")->capture_default_str();
  synth->add_option("--confidence-lo", synth_opt.confidence_lo,
                    "Confidence draw lower bound")->capture_default_str();
  synth->add_option("--confidence-hi", synth_opt.confidence_hi,
                    "Confidence draw upper bound")->capture_default_str();

  std::string report_path;
  std::string report_format = "table";
  CLI::App* report =
      app.add_subcommand("report", "Render a report JSON as table or CSV");
  report->add_option("report", report_path, "Report JSON path")->required();
  report->add_option("--format", report_format, "Output format: table|csv")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitError;
  }

  try {
    if (evaluate->parsed()) return cmd_evaluate(eval_opt);
    if (compare->parsed()) return cmd_compare(compare_opt);
    if (synth->parsed()) return cmd_synth(synth_opt);
    if (report->parsed()) return cmd_report(report_path, report_format);
  } catch (const coveval::error& e) {
    std::cerr << "coveval: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "coveval: internal error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

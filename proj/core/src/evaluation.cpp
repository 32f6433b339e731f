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

#include "coveval/evaluation.hpp"

#include <algorithm>
#include <map>
#include <thread>

#include "coveval/errors.hpp"

namespace coveval {

void RunConfig::validate() const {
  if (!(overlap_threshold > 0.0 && overlap_threshold <= 1.0)) {
    throw config_error("overlap threshold must lie in (0, 1]");
  }
  if (!(confidence_threshold > 0.0 && confidence_threshold <= 1.0)) {
    throw config_error("confidence threshold must lie in (0, 1]");
  }
  if (mu_list.empty()) {
    throw config_error("mu list must not be empty");
  }
  for (const double mu : mu_list) {
    if (!(mu >= 0.0 && mu <= 1.0)) {
      throw config_error("mu must lie in [0, 1], got " + std::to_string(mu));
    }
  }
  if (threads < 1) {
    throw config_error("threads must be >= 1");
  }
}

RunConfig::Standard RunConfig::standard_from_name(const std::string& name) {
  if (name == "map") return Standard::kMap;
  if (name == "coveval") return Standard::kCovEval;
  if (name == "both") return Standard::kBoth;
  throw config_error("unknown standard '" + name +
                     "'; valid values: map, coveval, both");
}

std::string RunConfig::standard_name(Standard standard) {
  switch (standard) {
    case Standard::kMap: return "map";
    case Standard::kCovEval: return "coveval";
    case Standard::kBoth: return "both";
  }
  return "both";
}

namespace {

struct Cell {
  std::vector<Detection> detections;
  std::vector<GroundTruth> ground_truths;
};

ImageScore score_cell(const std::string& class_id, const std::string& image_id,
                      Cell cell, const RunConfig& config) {
  ImageScore score;
  score.image_id = image_id;
  score.class_id = class_id;
  score.n_gts = cell.ground_truths.size();
  score.n_dets = cell.detections.size();

  sort_by_confidence(cell.detections);

  if (config.wants_coveval()) {
    std::vector<Detection> scored;
    scored.reserve(cell.detections.size());
    for (const auto& det : cell.detections) {
      if (det.confidence >= config.confidence_threshold) {
        scored.push_back(det);
      }
    }
    score.n_dets_scored = scored.size();
    const CArMatrix matrix = build_car_matrix(scored, cell.ground_truths);
    const MultiMatchResult result =
        multi_match(matrix, config.overlap_threshold);
    score.k_p = result.k_p;
    score.k_r = result.k_r;
    const XScores xs = image_scores(result);
    score.xp = xs.xp;
    score.xr = xs.xr;
  }

  if (config.wants_map()) {
    const OneToOneMatch match = greedy_one_to_one_match(
        cell.detections, cell.ground_truths, config.overlap_threshold);
    score.p_map = image_precision_map(match, cell.ground_truths.size());
  }
  return score;
}

}  // namespace

EvalReport evaluate_detections(std::span<const GroundTruth> ground_truths,
                               std::span<const Detection> detections,
                               std::span<const std::string> classes,
                               const RunConfig& config) {
  config.validate();
  if (classes.empty()) {
    throw config_error("no classes to evaluate");
  }

  // Group into (class, image) cells. std::map keys give a fixed job
  // order, independent of input order and thread count.
  std::map<std::string, std::map<std::string, Cell>> groups;
  for (const auto& cls : classes) groups[cls];
  for (const auto& gt : ground_truths) {
    auto cls_it = groups.find(gt.class_id);
    if (cls_it == groups.end()) continue;  // class not under evaluation
    cls_it->second[gt.image_id].ground_truths.push_back(gt);
  }
  for (const auto& det : detections) {
    auto cls_it = groups.find(det.class_id);
    if (cls_it == groups.end()) continue;
    cls_it->second[det.image_id].detections.push_back(det);
  }

  struct Job {
    const std::string* class_id;
    const std::string* image_id;
    Cell* cell;
  };
  std::vector<Job> jobs;
  for (auto& [cls, images] : groups) {
    for (auto& [image, cell] : images) {
      jobs.push_back(Job{&cls, &image, &cell});
    }
  }

  std::vector<ImageScore> scores(jobs.size());
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      scores[i] = score_cell(*jobs[i].class_id, *jobs[i].image_id,
                             std::move(*jobs[i].cell), config);
    }
  };

  const auto worker_count = static_cast<std::size_t>(config.threads);
  if (worker_count <= 1 || jobs.size() <= 1) {
    run_range(0, jobs.size());
  } else {
    std::vector<std::thread> workers;
    const std::size_t used = std::min(worker_count, jobs.size());
    workers.reserve(used);
    for (std::size_t w = 0; w < used; ++w) {
      const std::size_t begin = jobs.size() * w / used;
      const std::size_t end = jobs.size() * (w + 1) / used;
      workers.emplace_back(run_range, begin, end);
    }
    for (auto& worker : workers) worker.join();
  }

  // Reduce per class, in class order; results are byte-stable across
  // thread counts because the reduction order is fixed.
  std::vector<ClassScore> class_scores;
  std::size_t offset = 0;
  for (const auto& [cls, images] : groups) {
    const std::size_t count = images.size();
    if (count == 0) {
      ClassScore empty_class;
      empty_class.class_id = cls;
      for (const double mu : config.mu_list) {
        empty_class.f_ext.emplace_back(mu, std::nullopt);
      }
      class_scores.push_back(std::move(empty_class));
      continue;
    }
    class_scores.push_back(aggregate_class(
        cls, std::span(scores).subspan(offset, count), config.mu_list));
    offset += count;
  }

  EvalReport report = aggregate_all(std::move(class_scores));
  report.overlap_threshold = config.overlap_threshold;
  report.confidence_threshold = config.confidence_threshold;
  report.mu_list = config.mu_list;
  report.standard = RunConfig::standard_name(config.standard);
  report.threads = config.threads;
  report.seed = config.seed;
  report.images = std::move(scores);
  return report;
}

}  // namespace coveval

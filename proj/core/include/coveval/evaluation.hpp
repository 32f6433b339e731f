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

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coveval/matching.hpp"
#include "coveval/metrics.hpp"

namespace coveval {

/// Evaluation settings. The defaults are the toolkit's reference
/// configuration: overlap threshold 0.55 for both standards, and a 0.5
/// confidence cut applied to the covering standard only (the ranked mAP
/// pipeline scores all detections).
struct RunConfig {
  enum class Standard { kMap, kCovEval, kBoth };

  double overlap_threshold = 0.55;
  double confidence_threshold = 0.5;
  std::vector<double> mu_list{0.5, 0.8};
  Standard standard = Standard::kBoth;
  int threads = 1;
  std::uint64_t seed = 0;

  bool wants_map() const { return standard != Standard::kCovEval; }
  bool wants_coveval() const { return standard != Standard::kMap; }

  void validate() const;  ///< throws config_error

  static Standard standard_from_name(const std::string& name);
  static std::string standard_name(Standard standard);
};

/// Scores detections against ground truths for the given classes.
///
/// Per (class, image) cell:
///   - covering standard: detections with confidence >= the cut are
///     ranked, the CAr matrix is built and multi-matched at the overlap
///     threshold, giving XP and XR (with the undefined-statistic skip
///     rules of image_scores);
///   - mAP standard: all detections are ranked and greedily one-to-one
///     matched by IoU at the overlap threshold, giving the per-image
///     precision P (undefined on images without ground truths).
///
/// Cells are scored independently (optionally on `threads` workers) and
/// reduced in a fixed order, so the report is identical at any thread
/// count.
EvalReport evaluate_detections(std::span<const GroundTruth> ground_truths,
                               std::span<const Detection> detections,
                               std::span<const std::string> classes,
                               const RunConfig& config);

}  // namespace coveval

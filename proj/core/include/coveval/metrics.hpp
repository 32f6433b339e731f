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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coveval/matching.hpp"

namespace coveval {

/// Per-image, per-class scores. A missing optional means the statistic is
/// undefined for this image (e.g. recall with zero ground truths) and is
/// skipped from averages rather than imputed.
struct ImageScore {
  std::string image_id;
  std::string class_id;
  std::optional<double> xp;     ///< extended precision K_p / m
  std::optional<double> xr;     ///< extended recall K_r / n
  std::optional<double> p_map;  ///< the ranked per-image precision P
  // Diagnostics.
  std::size_t n_gts = 0;         ///< ground truths of this class on the image
  std::size_t n_dets = 0;        ///< all detections of this class
  std::size_t n_dets_scored = 0; ///< detections above the confidence cut
  std::size_t k_p = 0;
  std::size_t k_r = 0;
};

/// (XP, XR) for one image from a multi-match outcome:
///   xp = k_p / m  (undefined when m == 0 and n > 0; 0 when m > 0, n == 0)
///   xr = k_r / n  (undefined when n == 0)
struct XScores {
  std::optional<double> xp;
  std::optional<double> xr;
};
XScores image_scores(const MultiMatchResult& result);

/// Per-class aggregates; mean-over-images of the defined per-image values.
struct ClassScore {
  std::string class_id;
  std::optional<double> axr;
  std::optional<double> axp;
  std::optional<double> ap;
  /// (mu, F_ext) pairs in mu_list order; nullopt when AXP or AXR is
  /// unavailable.
  std::vector<std::pair<double, std::optional<double>>> f_ext;

  std::optional<double> f_ext_at(double mu) const;
};

/// Averages the defined per-image statistics of one class and fills
/// F_ext for every requested mu. Statistics undefined on every image are
/// reported as unavailable, never as 0. Throws config_error on an empty
/// score list.
ClassScore aggregate_class(std::string class_id,
                           std::span<const ImageScore> scores,
                           std::span<const double> mu_list);

/// The full evaluation result: per-class scores, their unweighted class
/// means, the echoed configuration, and per-image diagnostics.
struct EvalReport {
  std::vector<ClassScore> per_class;
  std::optional<double> maxr;
  std::optional<double> maxp;
  std::optional<double> map;
  std::vector<std::pair<double, std::optional<double>>> mf_ext;

  // Effective configuration echo; reports are self-describing.
  double overlap_threshold = 0.0;
  double confidence_threshold = 0.0;
  std::vector<double> mu_list;
  std::string standard;
  int threads = 1;
  std::uint64_t seed = 0;
  std::string gt_path;
  std::string det_path;

  std::vector<ImageScore> images;

  std::optional<double> mf_ext_at(double mu) const;
};

/// Unweighted class means (classes with an unavailable statistic are
/// skipped from that mean). Throws config_error on an empty class list.
EvalReport aggregate_all(std::vector<ClassScore> classes);

/// Extended F-score with trade-off factor mu in [0, 1]:
///
///   F(mu) = xp^(2(1-mu)) * xr^(2 mu) / ((1-mu) xp + mu xr)
///
/// so F(0) = xp, F(1) = xr and F(0.5) is the harmonic mean. Setting mu to
/// exactly 0 or 1 is deprecated (a model scoring only precision or only
/// recall can game the metric) and logs a warning. xp = xr = 0 has a zero
/// denominator; the score is defined as 0 and *degenerate is set when the
/// pointer is non-null. Out-of-range arguments throw config_error.
double f_ext_mu(double xp, double xr, double mu, bool* degenerate = nullptr);

/// Scenario presets for mu:
///   avoid-false-alarm      -> 0.05
///   balanced               -> 0.5
///   avoid-missing          -> 0.8   (suggested for most defect detection)
///   strongly-avoid-missing -> 0.95
/// Unknown names throw config_error listing the valid ones.
double mu_preset(std::string_view name);

}  // namespace coveval

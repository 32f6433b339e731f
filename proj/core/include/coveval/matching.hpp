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
#include <vector>

#include "coveval/box.hpp"

namespace coveval {

/// A detector output: labeled box with a confidence in [0, 1].
struct Detection {
  std::string image_id;
  std::string class_id;
  Box box;
  double confidence = 0.0;
};

/// An annotated reference box.
struct GroundTruth {
  std::string image_id;
  std::string class_id;
  Box box;
};

/// Stable sort by descending confidence; equal confidences keep their
/// input order so rankings are deterministic across runs and platforms.
void sort_by_confidence(std::vector<Detection>& detections);

/// The m x n table of CAr overlaps for one image and class: rows are
/// detections (ranked by confidence), columns are ground-truth boxes.
class CArMatrix {
 public:
  CArMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double at(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * cols_ + j] = v;
  }

  /// Max over row i; 0 when there are no columns.
  double row_max(std::size_t i) const;
  /// Max over column j; 0 when there are no rows.
  double col_max(std::size_t j) const;

 private:
  std::size_t rows_, cols_;
  std::vector<double> values_;
};

/// Builds the CAr matrix for one (image, class) group. All entries must
/// share a single image_id and class_id, otherwise a mixed_group_error is
/// thrown. Empty inputs yield 0 x n or m x 0 matrices.
CArMatrix build_car_matrix(std::span<const Detection> detections,
                           std::span<const GroundTruth> ground_truths);

/// Outcome of the covering multi-match: row/column threshold scans with
/// no one-to-one restriction, so one detection may cover many ground
/// truths and vice versa.
struct MultiMatchResult {
  std::size_t k_p = 0;  ///< valid detections (rows whose max clears the threshold)
  std::size_t k_r = 0;  ///< detected ground truths (columns likewise)
  std::size_t m = 0;    ///< detection count
  std::size_t n = 0;    ///< ground-truth count
  std::vector<bool> valid_rows;
  std::vector<bool> covered_cols;
};

/// Applies the multi-match rule at the given CAr threshold (must lie in
/// (0, 1], else config_error). Comparisons use >=.
MultiMatchResult multi_match(const CArMatrix& matrix, double car_threshold);

/// One-to-one matching outcome. Detection indices refer to the
/// confidence-sorted input list, so index + 1 is the detection's rank.
struct OneToOneMatch {
  struct Pair {
    std::size_t det_index;
    std::size_t gt_index;
    double iou;
  };
  std::vector<Pair> pairs;  ///< in ascending det_index order
  std::vector<std::size_t> unmatched_detections;
  std::vector<std::size_t> unmatched_gts;
};

/// Greedy one-to-one matching: detections are visited in rank order
/// (the input must already be confidence-sorted) and each claims the
/// still-free ground truth with the highest IoU >= iou_threshold, ties
/// broken by lowest ground-truth index. Claimed ground truths leave the
/// pool. iou_threshold must lie in (0, 1].
OneToOneMatch greedy_one_to_one_match(std::span<const Detection> detections,
                                      std::span<const GroundTruth> ground_truths,
                                      double iou_threshold);

/// Per-image precision: the k-th detected ground truth (in order of its
/// matching detection's rank m) contributes k/m, undetected ones
/// contribute 0, and the result is the mean over all n_gts values.
/// Returns nullopt when n_gts == 0 (precision over an empty target set
/// is undefined; callers skip the image).
std::optional<double> image_precision_map(const OneToOneMatch& match,
                                          std::size_t n_gts);

}  // namespace coveval

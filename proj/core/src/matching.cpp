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

#include "coveval/matching.hpp"

#include <algorithm>
#include <limits>

#include "coveval/errors.hpp"

namespace coveval {

void sort_by_confidence(std::vector<Detection>& detections) {
  std::stable_sort(detections.begin(), detections.end(),
                   [](const Detection& a, const Detection& b) {
                     return a.confidence > b.confidence;
                   });
}

double CArMatrix::row_max(std::size_t i) const {
  double best = 0.0;
  for (std::size_t j = 0; j < cols_; ++j) {
    best = std::max(best, at(i, j));
  }
  return best;
}

double CArMatrix::col_max(std::size_t j) const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    best = std::max(best, at(i, j));
  }
  return best;
}

namespace {

void check_single_group(std::span<const Detection> detections,
                        std::span<const GroundTruth> ground_truths) {
  const std::string* image = nullptr;
  const std::string* cls = nullptr;
  auto check = [&](const std::string& img, const std::string& c) {
    if (image == nullptr) {
      image = &img;
      cls = &c;
      return;
    }
    if (img != *image || c != *cls) {
      throw mixed_group_error("matching group mixes image/class ids: (" +
                              *image + ", " + *cls + ") vs (" + img + ", " +
                              c + ")");
    }
  };
  for (const auto& d : detections) check(d.image_id, d.class_id);
  for (const auto& g : ground_truths) check(g.image_id, g.class_id);
}

}  // namespace

CArMatrix build_car_matrix(std::span<const Detection> detections,
                           std::span<const GroundTruth> ground_truths) {
  check_single_group(detections, ground_truths);
  CArMatrix matrix(detections.size(), ground_truths.size());
  for (std::size_t i = 0; i < detections.size(); ++i) {
    for (std::size_t j = 0; j < ground_truths.size(); ++j) {
      matrix.set(i, j, car(ground_truths[j].box, detections[i].box));
    }
  }
  return matrix;
}

MultiMatchResult multi_match(const CArMatrix& matrix, double car_threshold) {
  if (!(car_threshold > 0.0 && car_threshold <= 1.0)) {
    throw config_error("CAr threshold must lie in (0, 1]");
  }
  MultiMatchResult result;
  result.m = matrix.rows();
  result.n = matrix.cols();
  result.valid_rows.resize(result.m, false);
  result.covered_cols.resize(result.n, false);
  for (std::size_t i = 0; i < result.m; ++i) {
    if (matrix.cols() > 0 && matrix.row_max(i) >= car_threshold) {
      result.valid_rows[i] = true;
      ++result.k_p;
    }
  }
  // Column rule: the same scan on the transposed matrix.
  for (std::size_t j = 0; j < result.n; ++j) {
    if (matrix.rows() > 0 && matrix.col_max(j) >= car_threshold) {
      result.covered_cols[j] = true;
      ++result.k_r;
    }
  }
  return result;
}

OneToOneMatch greedy_one_to_one_match(std::span<const Detection> detections,
                                      std::span<const GroundTruth> ground_truths,
                                      double iou_threshold) {
  if (!(iou_threshold > 0.0 && iou_threshold <= 1.0)) {
    throw config_error("IoU threshold must lie in (0, 1]");
  }
  OneToOneMatch match;
  std::vector<bool> gt_taken(ground_truths.size(), false);
  for (std::size_t i = 0; i < detections.size(); ++i) {
    double best_iou = -1.0;
    std::size_t best_j = ground_truths.size();
    for (std::size_t j = 0; j < ground_truths.size(); ++j) {
      if (gt_taken[j]) continue;
      const double overlap = iou(ground_truths[j].box, detections[i].box);
      if (overlap >= iou_threshold && overlap > best_iou) {
        best_iou = overlap;  // ties keep the lowest gt index
        best_j = j;
      }
    }
    if (best_j < ground_truths.size()) {
      gt_taken[best_j] = true;
      match.pairs.push_back({i, best_j, best_iou});
    } else {
      match.unmatched_detections.push_back(i);
    }
  }
  for (std::size_t j = 0; j < ground_truths.size(); ++j) {
    if (!gt_taken[j]) match.unmatched_gts.push_back(j);
  }
  return match;
}

std::optional<double> image_precision_map(const OneToOneMatch& match,
                                          std::size_t n_gts) {
  if (n_gts == 0) {
    return std::nullopt;
  }
  // Pairs arrive in ascending detection rank, so the k-th pair is the
  // k-th detected ground truth.
  double sum = 0.0;
  std::size_t k = 0;
  for (const auto& pair : match.pairs) {
    ++k;
    const double rank = static_cast<double>(pair.det_index + 1);
    sum += static_cast<double>(k) / rank;
  }
  return sum / static_cast<double>(n_gts);
}

}  // namespace coveval

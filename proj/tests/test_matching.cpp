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

#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <vector>

#include "coveval/errors.hpp"
#include "coveval/rng.hpp"

namespace coveval {
namespace {

Detection det(const Box& box, double confidence,
              const std::string& image = "img", const std::string& cls = "c") {
  return Detection{image, cls, box, confidence};
}

GroundTruth gt(const Box& box, const std::string& image = "img",
               const std::string& cls = "c") {
  return GroundTruth{image, cls, box};
}

CArMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
  CArMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m.set(i, j, rows[i][j]);
    }
  }
  return m;
}

// Exhaustive oracle: scan every entry of every row/column instead of
// using row/col maxima.
MultiMatchResult exhaustive_multi_match(const CArMatrix& m, double threshold) {
  MultiMatchResult r;
  r.m = m.rows();
  r.n = m.cols();
  r.valid_rows.assign(r.m, false);
  r.covered_cols.assign(r.n, false);
  for (std::size_t i = 0; i < r.m; ++i) {
    for (std::size_t j = 0; j < r.n; ++j) {
      if (m.at(i, j) >= threshold) r.valid_rows[i] = true;
    }
    if (r.valid_rows[i]) ++r.k_p;
  }
  for (std::size_t j = 0; j < r.n; ++j) {
    for (std::size_t i = 0; i < r.m; ++i) {
      if (m.at(i, j) >= threshold) r.covered_cols[j] = true;
    }
    if (r.covered_cols[j]) ++r.k_r;
  }
  return r;
}

// Independent greedy oracle working on sets and the clamped-span IoU.
std::vector<std::pair<std::size_t, std::size_t>> greedy_oracle(
    const std::vector<Detection>& dets, const std::vector<GroundTruth>& gts,
    double threshold) {
  auto oracle_iou = [](const Box& a, const Box& b) {
    const double w = std::max(0.0, std::min(a.x2(), b.x2()) -
                                       std::max(a.x1(), b.x1()));
    const double h = std::max(0.0, std::min(a.y2(), b.y2()) -
                                       std::max(a.y1(), b.y1()));
    const double inter = w * h;
    return inter / (a.area() + b.area() - inter);
  };
  std::set<std::size_t> free_gts;
  for (std::size_t j = 0; j < gts.size(); ++j) free_gts.insert(j);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < dets.size(); ++i) {
    double best = -1.0;
    std::size_t best_j = gts.size();
    for (const std::size_t j : free_gts) {
      const double overlap = oracle_iou(dets[i].box, gts[j].box);
      if (overlap >= threshold && overlap > best) {
        best = overlap;
        best_j = j;
      }
    }
    if (best_j < gts.size()) {
      free_gts.erase(best_j);
      pairs.emplace_back(i, best_j);
    }
  }
  return pairs;
}

TEST(SortByConfidence, StableDescending) {
  std::vector<Detection> dets{det(Box(0, 0, 1, 1), 0.5),
                              det(Box(1, 1, 2, 2), 0.9),
                              det(Box(2, 2, 3, 3), 0.5)};
  sort_by_confidence(dets);
  EXPECT_DOUBLE_EQ(dets[0].confidence, 0.9);
  // The two 0.5 entries keep their input order.
  EXPECT_DOUBLE_EQ(dets[1].box.x1(), 0.0);
  EXPECT_DOUBLE_EQ(dets[2].box.x1(), 2.0);
}

TEST(CArMatrixBuild, IdentityPair) {
  const auto m = build_car_matrix(
      std::vector<Detection>{det(Box(0, 0, 10, 10), 0.9)},
      std::vector<GroundTruth>{gt(Box(0, 0, 10, 10))});
  ASSERT_EQ(m.rows(), 1u);
  ASSERT_EQ(m.cols(), 1u);
  EXPECT_DOUBLE_EQ(m.at(0, 0), 1.0);
}

TEST(CArMatrixBuild, PerPairValues) {
  const std::vector<Detection> dets{det(Box(0, 0, 10, 10), 0.9),
                                    det(Box(30, 30, 40, 40), 0.8)};
  const std::vector<GroundTruth> gts{gt(Box(2, 2, 8, 8)),
                                     gt(Box(100, 100, 110, 110))};
  const auto m = build_car_matrix(dets, gts);
  EXPECT_DOUBLE_EQ(m.at(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(m.at(0, 1), 0.0);
  EXPECT_DOUBLE_EQ(m.at(1, 0), 0.0);
  EXPECT_DOUBLE_EQ(m.at(1, 1), 0.0);
}

TEST(CArMatrixBuild, EmptyDetections) {
  const auto m = build_car_matrix(
      std::vector<Detection>{},
      std::vector<GroundTruth>{gt(Box(0, 0, 1, 1)), gt(Box(2, 2, 3, 3))});
  EXPECT_EQ(m.rows(), 0u);
  EXPECT_EQ(m.cols(), 2u);
}

TEST(CArMatrixBuild, RejectsMixedGroups) {
  EXPECT_THROW(
      build_car_matrix(
          std::vector<Detection>{det(Box(0, 0, 1, 1), 0.9, "img_a")},
          std::vector<GroundTruth>{gt(Box(0, 0, 1, 1), "img_b")}),
      mixed_group_error);
  EXPECT_THROW(
      build_car_matrix(
          std::vector<Detection>{det(Box(0, 0, 1, 1), 0.9, "img", "cat"),
                                 det(Box(0, 0, 1, 1), 0.8, "img", "dog")},
          std::vector<GroundTruth>{}),
      mixed_group_error);
}

TEST(MultiMatch, Examples) {
  const auto a = multi_match(matrix_from({{0.9, 0.0}, {0.6, 0.7}}), 0.55);
  EXPECT_EQ(a.k_p, 2u);
  EXPECT_EQ(a.k_r, 2u);

  // Row 2 is a false alarm; one detection covers both ground truths.
  const auto b = multi_match(matrix_from({{0.9, 0.6}, {0.0, 0.0}}), 0.55);
  EXPECT_EQ(b.k_p, 1u);
  EXPECT_EQ(b.k_r, 2u);
  EXPECT_TRUE(b.valid_rows[0]);
  EXPECT_FALSE(b.valid_rows[1]);

  const auto c =
      multi_match(matrix_from({{0, 0}, {0, 0}, {0, 0}}), 0.55);
  EXPECT_EQ(c.k_p, 0u);
  EXPECT_EQ(c.k_r, 0u);
}

TEST(MultiMatch, ThresholdBoundaryUsesGreaterOrEqual) {
  const auto r = multi_match(matrix_from({{0.55}}), 0.55);
  EXPECT_EQ(r.k_p, 1u);
  EXPECT_EQ(r.k_r, 1u);
}

TEST(MultiMatch, RejectsBadThreshold) {
  const auto m = matrix_from({{0.5}});
  EXPECT_THROW(multi_match(m, 0.0), config_error);
  EXPECT_THROW(multi_match(m, -0.1), config_error);
  EXPECT_THROW(multi_match(m, 1.01), config_error);
}

TEST(MultiMatch, EmptyMatrices) {
  const auto a = multi_match(CArMatrix(0, 3), 0.55);
  EXPECT_EQ(a.k_p, 0u);
  EXPECT_EQ(a.k_r, 0u);
  EXPECT_EQ(a.n, 3u);
  const auto b = multi_match(CArMatrix(2, 0), 0.55);
  EXPECT_EQ(b.k_p, 0u);
  EXPECT_EQ(b.m, 2u);
}

TEST(MultiMatch, MatchesExhaustiveOracle) {
  Rng rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    const auto rows = rng.index(8) + 1;
    const auto cols = rng.index(8) + 1;
    CArMatrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        m.set(i, j, rng.uniform01());
      }
    }
    const double threshold = rng.uniform(0.05, 1.0);
    const auto got = multi_match(m, threshold);
    const auto want = exhaustive_multi_match(m, threshold);
    EXPECT_EQ(got.k_p, want.k_p);
    EXPECT_EQ(got.k_r, want.k_r);
    EXPECT_EQ(got.valid_rows, want.valid_rows);
    EXPECT_EQ(got.covered_cols, want.covered_cols);
  }
}

// Relaxing the threshold never decreases k_p or k_r.
TEST(MultiMatch, MonotoneInThreshold) {
  Rng rng(555);
  for (int trial = 0; trial < 100; ++trial) {
    CArMatrix m(4, 5);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 5; ++j) m.set(i, j, rng.uniform01());
    }
    std::size_t prev_kp = 0, prev_kr = 0;
    for (double threshold = 1.0; threshold >= 0.05; threshold -= 0.05) {
      const auto r = multi_match(m, threshold);
      EXPECT_GE(r.k_p, prev_kp);
      EXPECT_GE(r.k_r, prev_kr);
      prev_kp = r.k_p;
      prev_kr = r.k_r;
    }
  }
}

// A second detection of an already-covered ground truth never changes
// k_r, and raises k_p exactly when its own row clears the threshold.
TEST(MultiMatch, DuplicateDetectionTolerance) {
  Rng rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.index(4) + 1;
    CArMatrix base(1, n);
    for (std::size_t j = 0; j < n; ++j) base.set(0, j, rng.uniform01());
    const double threshold = 0.55;
    const auto before = multi_match(base, threshold);

    CArMatrix extended(2, n);
    for (std::size_t j = 0; j < n; ++j) extended.set(0, j, base.at(0, j));
    bool clears = false;
    for (std::size_t j = 0; j < n; ++j) {
      const double v = rng.uniform01();
      extended.set(1, j, v);
      if (v >= threshold) clears = true;
    }
    const auto after = multi_match(extended, threshold);
    EXPECT_GE(after.k_r, before.k_r);
    EXPECT_EQ(after.k_p, before.k_p + (clears ? 1 : 0));
  }
}

TEST(GreedyMatch, IdentityPair) {
  const std::vector<Detection> dets{det(Box(0, 0, 10, 10), 0.9)};
  const std::vector<GroundTruth> gts{gt(Box(0, 0, 10, 10))};
  const auto match = greedy_one_to_one_match(dets, gts, 0.55);
  ASSERT_EQ(match.pairs.size(), 1u);
  EXPECT_EQ(match.pairs[0].det_index, 0u);
  EXPECT_EQ(match.pairs[0].gt_index, 0u);
  EXPECT_DOUBLE_EQ(match.pairs[0].iou, 1.0);
  EXPECT_TRUE(match.unmatched_detections.empty());
  EXPECT_TRUE(match.unmatched_gts.empty());
}

// A small, visually-correct detection inside a long ground truth cannot
// clear the IoU threshold even though its CAr is 1.
TEST(GreedyMatch, ScaleMismatchStaysUnmatched) {
  const std::vector<Detection> dets{det(Box(10, 2, 20, 8), 0.95)};
  const std::vector<GroundTruth> gts{gt(Box(0, 0, 100, 10))};
  ASSERT_DOUBLE_EQ(car(gts[0].box, dets[0].box), 1.0);
  ASSERT_LT(iou(gts[0].box, dets[0].box), 0.55);
  const auto match = greedy_one_to_one_match(dets, gts, 0.55);
  EXPECT_TRUE(match.pairs.empty());
  EXPECT_EQ(match.unmatched_detections.size(), 1u);
  EXPECT_EQ(match.unmatched_gts.size(), 1u);
}

TEST(GreedyMatch, RankOneWinsSharedTarget) {
  const std::vector<Detection> dets{det(Box(0, 0, 10, 10), 0.9),
                                    det(Box(1, 0, 11, 10), 0.8)};
  const std::vector<GroundTruth> gts{gt(Box(0, 0, 10, 10))};
  const auto match = greedy_one_to_one_match(dets, gts, 0.55);
  ASSERT_EQ(match.pairs.size(), 1u);
  EXPECT_EQ(match.pairs[0].det_index, 0u);
  ASSERT_EQ(match.unmatched_detections.size(), 1u);
  EXPECT_EQ(match.unmatched_detections[0], 1u);
}

TEST(GreedyMatch, AgreesWithOracleAndKeepsInvariants) {
  Rng rng(424242);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t m = rng.index(6);
    const std::size_t n = rng.index(6);
    std::vector<Detection> dets;
    std::vector<GroundTruth> gts;
    for (std::size_t i = 0; i < m; ++i) {
      const double x = rng.uniform(0.0, 6.0);
      const double y = rng.uniform(0.0, 6.0);
      const double w = rng.uniform(0.5, 4.0);
      const double h = rng.uniform(0.5, 4.0);
      dets.push_back(det(Box(x, y, x + w, y + h), 1.0 - 0.01 * i));
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double x = rng.uniform(0.0, 6.0);
      const double y = rng.uniform(0.0, 6.0);
      const double w = rng.uniform(0.5, 4.0);
      const double h = rng.uniform(0.5, 4.0);
      gts.push_back(gt(Box(x, y, x + w, y + h)));
    }
    const double threshold = 0.3;
    const auto match = greedy_one_to_one_match(dets, gts, threshold);

    // Invariants: no reuse, no pairing below threshold, bounded size.
    std::set<std::size_t> used_dets, used_gts;
    for (const auto& pair : match.pairs) {
      EXPECT_TRUE(used_dets.insert(pair.det_index).second);
      EXPECT_TRUE(used_gts.insert(pair.gt_index).second);
      EXPECT_GE(pair.iou, threshold);
    }
    EXPECT_LE(match.pairs.size(), std::min(m, n));
    EXPECT_EQ(match.pairs.size() + match.unmatched_detections.size(), m);
    EXPECT_EQ(match.pairs.size() + match.unmatched_gts.size(), n);

    const auto expected = greedy_oracle(dets, gts, threshold);
    ASSERT_EQ(match.pairs.size(), expected.size());
    for (std::size_t p = 0; p < expected.size(); ++p) {
      EXPECT_EQ(match.pairs[p].det_index, expected[p].first);
      EXPECT_EQ(match.pairs[p].gt_index, expected[p].second);
    }
  }
}

TEST(ImagePrecision, HandEnumeratedExample) {
  // Two ground truths detected by the rank-1 and rank-3 detections:
  // P = (1/1 + 2/3) / 2 = 5/6.
  OneToOneMatch match;
  match.pairs = {{0, 0, 0.9}, {2, 1, 0.8}};
  match.unmatched_detections = {1};
  const auto p = image_precision_map(match, 2);
  ASSERT_TRUE(p.has_value());
  EXPECT_DOUBLE_EQ(*p, 5.0 / 6.0);
}

TEST(ImagePrecision, PerfectSingleDetection) {
  OneToOneMatch match;
  match.pairs = {{0, 0, 1.0}};
  EXPECT_DOUBLE_EQ(image_precision_map(match, 1).value(), 1.0);
}

TEST(ImagePrecision, AllUndetected) {
  OneToOneMatch match;
  match.unmatched_gts = {0, 1};
  EXPECT_DOUBLE_EQ(image_precision_map(match, 2).value(), 0.0);
}

TEST(ImagePrecision, UndefinedWithoutGroundTruths) {
  OneToOneMatch match;
  EXPECT_FALSE(image_precision_map(match, 0).has_value());
}

// P == 1 exactly when the top-n ranked detections match all n ground
// truths in rank-consecutive order.
TEST(ImagePrecision, OneOnlyForPerfectPrefix) {
  OneToOneMatch perfect;
  perfect.pairs = {{0, 2, 1.0}, {1, 0, 1.0}, {2, 1, 1.0}};
  EXPECT_DOUBLE_EQ(image_precision_map(perfect, 3).value(), 1.0);

  OneToOneMatch gap;  // rank 2 missing
  gap.pairs = {{0, 0, 1.0}, {2, 1, 1.0}};
  EXPECT_LT(image_precision_map(gap, 2).value(), 1.0);

  Rng rng(31337);
  for (int trial = 0; trial < 200; ++trial) {
    OneToOneMatch match;
    const std::size_t n = rng.index(5) + 1;
    std::size_t rank = 0;
    bool consecutive = true;
    for (std::size_t k = 0; k < n; ++k) {
      rank += rng.index(3);  // skip 0..2 ranks before the next match
      if (rank != k) consecutive = false;
      match.pairs.push_back({rank, k, 1.0});
      ++rank;
    }
    const double p = image_precision_map(match, n).value();
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_EQ(p == 1.0, consecutive);
  }
}

}  // namespace
}  // namespace coveval

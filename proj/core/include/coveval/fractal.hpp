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
#include <vector>

#include "coveval/rng.hpp"

namespace coveval {

struct Point2D {
  double x = 0.0;
  double y = 0.0;
};

/// Parameters of one curve-refinement transform. Each iteration replaces
/// every segment by inserting `points_per_segment` (G) new nodes. The
/// g-th node of a segment lands in the g-th of G equal sub-intervals, at
/// along-sub-interval fraction t and signed left-normal offset
/// h * |segment|:
///
///   deterministic: t and h are the constants t_lo (== t_hi), h_lo (== h_hi)
///   random:        t ~ U(t_lo, t_hi), h ~ U(h_lo, h_hi), drawn
///                  independently per inserted node
struct TransformParams {
  enum class Kind { kDeterministic, kRandom };

  Kind kind = Kind::kRandom;
  int points_per_segment = 1;  ///< G >= 1
  double t_lo = 0.5;
  double t_hi = 0.5;
  double h_lo = 0.0;
  double h_hi = 0.0;

  /// Throws config_error on violated bounds (0 < t_lo <= t_hi < 1,
  /// h_lo <= h_hi, deterministic requires degenerate ranges).
  void validate() const;
};

/// A fractal polyline node. Original endpoints carry n = 0 and t_order 0
/// and 1; a node inserted at iteration n >= 1 with group order k carries
/// the topological order T(n, k). Points are stored in strictly
/// increasing t_order, which is exactly traversal order.
struct IndexedPoint {
  double x = 0.0;
  double y = 0.0;
  int n = 0;            ///< insertion iteration
  std::uint64_t k = 0;  ///< 1-based group order within the iteration
  double t_order = 0.0;
};

struct PolyCurve {
  std::vector<IndexedPoint> points;
  int depth = 0;
  TransformParams params;
  std::uint64_t seed = 0;
};

/// Axis-aligned bounds of a polyline.
struct CurveBounds {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
  double width() const noexcept { return max_x - min_x; }
  double height() const noexcept { return max_y - min_y; }
};

CurveBounds curve_bounds(const PolyCurve& curve);

/// Total polyline length (sum of segment lengths).
double curve_length(const PolyCurve& curve);

/// Topological order of the point inserted at iteration n with group
/// order k:
///
///   T(n, k) = (k + floor((k - 1) / G)) / (G + 1)^n
///
/// Requires n >= 1 and 1 <= k <= G * (G + 1)^(n - 1); otherwise throws
/// invalid_index_error. Sorting all points of a generated curve by T
/// reproduces traversal order at every depth.
double topological_order(int n, std::uint64_t k, int points_per_segment);

/// One refinement iteration: every segment of the input receives G new
/// nodes (numbered in traversal order), and the output depth is
/// depth + 1. The input must be a full generated curve with
/// (G + 1)^depth + 1 points. The rng is only consumed for the random
/// kind, and an identical rng state always yields an identical output.
PolyCurve apply_transform(const PolyCurve& curve, const TransformParams& params,
                          Rng& rng);

inline constexpr std::size_t kDefaultCurvePointCap = std::size_t{1} << 22;

/// Applies the transform `depth` times starting from the two-point base
/// segment a-b. The result has exactly (G + 1)^depth + 1 points; a
/// configuration whose point count would exceed max_points throws
/// resource_error. Identical (params, depth, seed) yield bit-identical
/// curves.
PolyCurve generate_curve(const TransformParams& params, int depth,
                         std::uint64_t seed, Point2D a = {0.0, 0.0},
                         Point2D b = {1.0, 0.0},
                         std::size_t max_points = kDefaultCurvePointCap);

/// The contiguous run of points with t_order in [t_a, t_b] (inclusive),
/// indices preserved for inspection. Throws window_error when the window
/// holds fewer than two points, config_error on an invalid window.
PolyCurve extract_subcurve(const PolyCurve& curve, double t_a, double t_b);

/// Box-counting fractal dimension: slope of log(occupied grid cells)
/// against log(1 / scale), least squares over the given grid scales.
/// Requires >= 3 scales spanning at least one decade; an all-equal count
/// profile throws estimation_error.
double estimate_fractal_dimension(const PolyCurve& curve,
                                  std::span<const double> grid_scales);

/// Convenience: `count` log-spaced scales from coarse down to fine.
std::vector<double> geometric_scales(double coarse, double fine, int count);

}  // namespace coveval

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

#include "coveval/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>

#include "coveval/errors.hpp"

namespace coveval {

namespace {

/// (G + 1)^e as a saturating unsigned integer.
std::uint64_t pow_saturating(std::uint64_t base, int exponent) {
  std::uint64_t result = 1;
  for (int i = 0; i < exponent; ++i) {
    if (result > std::numeric_limits<std::uint64_t>::max() / base) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    result *= base;
  }
  return result;
}

}  // namespace

void TransformParams::validate() const {
  if (points_per_segment < 1) {
    throw config_error("points_per_segment must be >= 1");
  }
  if (!(std::isfinite(t_lo) && std::isfinite(t_hi) && std::isfinite(h_lo) &&
        std::isfinite(h_hi))) {
    throw config_error("transform parameters must be finite");
  }
  if (!(0.0 < t_lo && t_lo <= t_hi && t_hi < 1.0)) {
    throw config_error("requires 0 < t_lo <= t_hi < 1");
  }
  if (!(h_lo <= h_hi)) {
    throw config_error("requires h_lo <= h_hi");
  }
  if (kind == Kind::kDeterministic && (t_lo != t_hi || h_lo != h_hi)) {
    throw config_error(
        "deterministic transforms use constants: t_lo == t_hi and "
        "h_lo == h_hi required");
  }
}

CurveBounds curve_bounds(const PolyCurve& curve) {
  CurveBounds bounds;
  if (curve.points.empty()) return bounds;
  bounds.min_x = bounds.max_x = curve.points.front().x;
  bounds.min_y = bounds.max_y = curve.points.front().y;
  for (const auto& point : curve.points) {
    bounds.min_x = std::min(bounds.min_x, point.x);
    bounds.max_x = std::max(bounds.max_x, point.x);
    bounds.min_y = std::min(bounds.min_y, point.y);
    bounds.max_y = std::max(bounds.max_y, point.y);
  }
  return bounds;
}

double curve_length(const PolyCurve& curve) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const double dx = curve.points[i + 1].x - curve.points[i].x;
    const double dy = curve.points[i + 1].y - curve.points[i].y;
    total += std::hypot(dx, dy);
  }
  return total;
}

double topological_order(int n, std::uint64_t k, int points_per_segment) {
  const auto g = static_cast<std::uint64_t>(points_per_segment);
  if (points_per_segment < 1) {
    throw invalid_index_error("points_per_segment must be >= 1");
  }
  if (n < 1) {
    throw invalid_index_error("iteration index n must be >= 1");
  }
  const std::uint64_t k_max = pow_saturating(g + 1, n - 1) >
                                      std::numeric_limits<std::uint64_t>::max() / g
                                  ? std::numeric_limits<std::uint64_t>::max()
                                  : g * pow_saturating(g + 1, n - 1);
  if (k < 1 || k > k_max) {
    throw invalid_index_error("group order k = " + std::to_string(k) +
                              " outside [1, G*(G+1)^(n-1)] for n = " +
                              std::to_string(n));
  }
  const double numerator = static_cast<double>(k + (k - 1) / g);
  double denominator = 1.0;
  for (int i = 0; i < n; ++i) denominator *= static_cast<double>(g + 1);
  return numerator / denominator;
}

PolyCurve apply_transform(const PolyCurve& curve, const TransformParams& params,
                          Rng& rng) {
  params.validate();
  const auto g = static_cast<std::uint64_t>(params.points_per_segment);
  const std::uint64_t expected =
      pow_saturating(g + 1, curve.depth) + 1;
  if (curve.points.size() < 2 || curve.points.size() != expected) {
    throw config_error(
        "apply_transform requires a full generated curve: expected " +
        std::to_string(expected) + " points at depth " +
        std::to_string(curve.depth) + ", got " +
        std::to_string(curve.points.size()));
  }
  if (curve.depth > 0 &&
      curve.params.points_per_segment != params.points_per_segment) {
    throw config_error(
        "points_per_segment must stay constant across iterations");
  }

  const bool random = params.kind == TransformParams::Kind::kRandom;
  const int n_new = curve.depth + 1;

  PolyCurve out;
  out.depth = n_new;
  out.params = params;
  out.seed = curve.seed;
  out.points.reserve((curve.points.size() - 1) * (g + 1) + 1);

  for (std::size_t s = 0; s + 1 < curve.points.size(); ++s) {
    const IndexedPoint& p0 = curve.points[s];
    const IndexedPoint& p1 = curve.points[s + 1];
    out.points.push_back(p0);
    const double dx = p1.x - p0.x;
    const double dy = p1.y - p0.y;
    for (std::uint64_t j = 1; j <= g; ++j) {
      const double t = random ? rng.uniform(params.t_lo, params.t_hi)
                              : params.t_lo;
      const double h = random ? rng.uniform(params.h_lo, params.h_hi)
                              : params.h_lo;
      // The j-th node lives in the j-th of G equal sub-intervals so that
      // nodes advance along the segment in group-order.
      const double frac =
          (static_cast<double>(j - 1) + t) / static_cast<double>(g);
      const double bx = p0.x + frac * dx;
      const double by = p0.y + frac * dy;
      // Left-hand normal of (dx, dy) is (-dy, dx) with |normal| = |segment|,
      // so the offset h is already a fraction of the segment length.
      IndexedPoint node;
      node.x = bx - h * dy;
      node.y = by + h * dx;
      node.n = n_new;
      node.k = static_cast<std::uint64_t>(s) * g + j;
      node.t_order =
          topological_order(n_new, node.k, params.points_per_segment);
      out.points.push_back(node);
    }
  }
  out.points.push_back(curve.points.back());
  return out;
}

PolyCurve generate_curve(const TransformParams& params, int depth,
                         std::uint64_t seed, Point2D a, Point2D b,
                         std::size_t max_points) {
  params.validate();
  if (depth < 0) {
    throw config_error("depth must be >= 0");
  }
  if (a.x == b.x && a.y == b.y) {
    throw config_error("base segment endpoints must differ");
  }
  const auto g = static_cast<std::uint64_t>(params.points_per_segment);
  const std::uint64_t final_points = pow_saturating(g + 1, depth);
  if (final_points == std::numeric_limits<std::uint64_t>::max() ||
      final_points + 1 > max_points) {
    throw resource_error("curve would exceed the point cap of " +
                         std::to_string(max_points) + " points");
  }

  PolyCurve curve;
  curve.depth = 0;
  curve.params = params;
  curve.seed = seed;
  curve.points.push_back(IndexedPoint{a.x, a.y, 0, 0, 0.0});
  curve.points.push_back(IndexedPoint{b.x, b.y, 0, 1, 1.0});

  Rng rng(seed);
  for (int i = 0; i < depth; ++i) {
    curve = apply_transform(curve, params, rng);
  }
  curve.seed = seed;
  return curve;
}

PolyCurve extract_subcurve(const PolyCurve& curve, double t_a, double t_b) {
  if (!(t_a >= 0.0 && t_a < t_b && t_b <= 1.0)) {
    throw config_error("subcurve window requires 0 <= t_a < t_b <= 1");
  }
  const auto& points = curve.points;
  auto first = std::find_if(points.begin(), points.end(),
                            [&](const IndexedPoint& p) {
                              return p.t_order >= t_a;
                            });
  auto last = first;
  while (last != points.end() && last->t_order <= t_b) ++last;
  const auto count = static_cast<std::size_t>(last - first);
  if (count < 2) {
    throw window_error("subcurve window [" + std::to_string(t_a) + ", " +
                       std::to_string(t_b) + "] holds " +
                       std::to_string(count) + " points; need at least 2");
  }
  PolyCurve out;
  out.depth = curve.depth;
  out.params = curve.params;
  out.seed = curve.seed;
  out.points.assign(first, last);
  return out;
}

namespace {

std::size_t occupied_cells(const PolyCurve& curve, const CurveBounds& bounds,
                           double scale) {
  std::unordered_set<std::uint64_t> cells;
  auto mark = [&](double x, double y) {
    const auto ix = static_cast<std::uint64_t>(
        std::floor((x - bounds.min_x) / scale));
    const auto iy = static_cast<std::uint64_t>(
        std::floor((y - bounds.min_y) / scale));
    cells.insert((ix << 32) ^ iy);
  };
  const double step = scale / 4.0;
  for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
    const auto& p0 = curve.points[i];
    const auto& p1 = curve.points[i + 1];
    const double len = std::hypot(p1.x - p0.x, p1.y - p0.y);
    const auto substeps =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(len / step)));
    for (std::size_t s = 0; s <= substeps; ++s) {
      const double f = static_cast<double>(s) / static_cast<double>(substeps);
      mark(p0.x + f * (p1.x - p0.x), p0.y + f * (p1.y - p0.y));
    }
  }
  return cells.size();
}

}  // namespace

double estimate_fractal_dimension(const PolyCurve& curve,
                                  std::span<const double> grid_scales) {
  if (curve.points.size() < 2) {
    throw config_error("dimension estimate needs a curve with >= 2 points");
  }
  if (grid_scales.size() < 3) {
    throw config_error("dimension estimate needs >= 3 grid scales");
  }
  double lo = grid_scales[0], hi = grid_scales[0];
  for (const double s : grid_scales) {
    if (!(s > 0.0) || !std::isfinite(s)) {
      throw config_error("grid scales must be positive and finite");
    }
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  if (hi / lo < 10.0 * (1.0 - 1e-12)) {
    throw config_error("grid scales must span at least one decade");
  }

  const CurveBounds bounds = curve_bounds(curve);
  std::vector<double> xs, ys;
  xs.reserve(grid_scales.size());
  ys.reserve(grid_scales.size());
  bool all_equal = true;
  std::size_t first_count = 0;
  for (std::size_t i = 0; i < grid_scales.size(); ++i) {
    const std::size_t count = occupied_cells(curve, bounds, grid_scales[i]);
    if (i == 0) {
      first_count = count;
    } else if (count != first_count) {
      all_equal = false;
    }
    xs.push_back(std::log(1.0 / grid_scales[i]));
    ys.push_back(std::log(static_cast<double>(count)));
  }
  if (all_equal) {
    throw estimation_error(
        "degenerate box-counting fit: occupied-cell count is constant "
        "across all scales");
  }

  // Least-squares slope of ys against xs.
  const auto n = static_cast<double>(xs.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> geometric_scales(double coarse, double fine, int count) {
  if (!(coarse > fine && fine > 0.0) || count < 2) {
    throw config_error("geometric_scales requires coarse > fine > 0, count >= 2");
  }
  std::vector<double> scales;
  scales.reserve(static_cast<std::size_t>(count));
  const double ratio = std::pow(fine / coarse, 1.0 / (count - 1));
  double s = coarse;
  for (int i = 0; i < count; ++i) {
    scales.push_back(s);
    s *= ratio;
  }
  return scales;
}

}  // namespace coveval

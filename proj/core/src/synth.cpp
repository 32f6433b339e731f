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

#include "coveval/synth.hpp"

#include <algorithm>
#include <cmath>

#include "coveval/errors.hpp"
#include "coveval/rng.hpp"

namespace coveval {

void DetectorModel::validate() const {
  if (!(scale_lo > 0.0 && scale_lo <= scale_hi)) {
    throw config_error("requires 0 < scale_lo <= scale_hi");
  }
  if (!(position_jitter >= 0.0)) {
    throw config_error("position_jitter must be >= 0");
  }
  if (duplication < 1) {
    throw config_error("duplication must be >= 1");
  }
  if (!(drop_out >= 0.0 && drop_out <= 1.0)) {
    throw config_error("drop_out must lie in [0, 1]");
  }
  if (false_alarms < 0) {
    throw config_error("false_alarms must be >= 0");
  }
  if (!(0.0 <= confidence_lo && confidence_lo <= confidence_hi &&
        confidence_hi <= 1.0)) {
    throw config_error("requires 0 <= confidence_lo <= confidence_hi <= 1");
  }
}

namespace {

/// Points on the polyline at arc-length positions 0, stride, 2*stride, ...
std::vector<Point2D> arc_length_tiling(const PolyCurve& curve, double stride) {
  std::vector<Point2D> centers;
  const auto& points = curve.points;
  double next_arc = 0.0;
  double walked = 0.0;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const double dx = points[i + 1].x - points[i].x;
    const double dy = points[i + 1].y - points[i].y;
    const double len = std::hypot(dx, dy);
    while (next_arc <= walked + len) {
      const double f = len > 0.0 ? (next_arc - walked) / len : 0.0;
      centers.push_back({points[i].x + f * dx, points[i].y + f * dy});
      next_arc += stride;
    }
    walked += len;
  }
  return centers;
}

Box square_at(Point2D center, double side) {
  return Box(center.x - side / 2.0, center.y - side / 2.0,
             center.x + side / 2.0, center.y + side / 2.0);
}

}  // namespace

SyntheticScene synthesize_annotations(const PolyCurve& curve, double box_size,
                                      double stride, const DetectorModel& model,
                                      std::uint64_t seed,
                                      const std::string& image_id,
                                      const std::string& class_id) {
  model.validate();
  if (!(box_size > 0.0) || !(stride > 0.0)) {
    throw config_error("box_size and stride must be > 0");
  }
  if (curve.points.size() < 2) {
    throw config_error("scene synthesis needs a curve with >= 2 points");
  }
  const double length = curve_length(curve);
  if (stride > length) {
    throw empty_scene_error("stride " + std::to_string(stride) +
                            " exceeds curve length " + std::to_string(length) +
                            "; no boxes can be tiled");
  }

  SyntheticScene scene{
      image_id,
      class_id,
      curve,
      /*extent=*/[&] {
        const CurveBounds bounds = curve_bounds(curve);
        const double pad = 3.0 * box_size * std::max(1.0, model.scale_hi);
        return Box(bounds.min_x - pad, bounds.min_y - pad, bounds.max_x + pad,
                   bounds.max_y + pad);
      }(),
      box_size,
      stride,
      model,
      seed,
      {},
      {}};

  const std::vector<Point2D> centers = arc_length_tiling(curve, stride);
  scene.gt_boxes.reserve(centers.size());
  for (const Point2D& center : centers) {
    scene.gt_boxes.push_back(
        GroundTruth{image_id, class_id, square_at(center, box_size)});
  }

  // Fixed draw order per ground truth: drop?, then per copy
  // (scale, dx, dy, confidence). Degenerate ranges still consume draws,
  // so the stream layout is independent of the parameter values.
  Rng rng(seed);
  const CurveBounds bounds = curve_bounds(curve);
  for (std::size_t gi = 0; gi < centers.size(); ++gi) {
    const double u_drop = rng.uniform01();
    if (u_drop < model.drop_out) continue;
    for (int copy = 0; copy < model.duplication; ++copy) {
      const double side =
          rng.uniform(model.scale_lo, model.scale_hi) * box_size;
      const double jitter = model.position_jitter * box_size;
      const double dx = rng.uniform(-jitter, jitter);
      const double dy = rng.uniform(-jitter, jitter);
      const double confidence =
          rng.uniform(model.confidence_lo, model.confidence_hi);
      const Point2D center{centers[gi].x + dx, centers[gi].y + dy};
      scene.det_boxes.push_back(
          Detection{image_id, class_id, square_at(center, side), confidence});
    }
  }

  // Spurious boxes go on a margin ring outside the curve bounds, far
  // enough out that they cannot touch any ground-truth box.
  for (int f = 0; f < model.false_alarms; ++f) {
    const double side = rng.uniform(model.scale_lo, model.scale_hi) * box_size;
    const std::size_t edge = rng.index(4);
    const double along = rng.uniform01();
    const double confidence =
        rng.uniform(model.confidence_lo, model.confidence_hi);
    const double offset = box_size / 2.0 + side / 2.0 + 0.25 * box_size;
    Point2D center{};
    switch (edge) {
      case 0:  // below
        center = {bounds.min_x + along * bounds.width(), bounds.min_y - offset};
        break;
      case 1:  // above
        center = {bounds.min_x + along * bounds.width(), bounds.max_y + offset};
        break;
      case 2:  // left
        center = {bounds.min_x - offset, bounds.min_y + along * bounds.height()};
        break;
      default:  // right
        center = {bounds.max_x + offset, bounds.min_y + along * bounds.height()};
        break;
    }
    scene.det_boxes.push_back(
        Detection{image_id, class_id, square_at(center, side), confidence});
  }

  // Shift the whole scene into image coordinates: extent corner at (0, 0),
  // like an image of size extent.width() x extent.height().
  const double shift_x = -scene.extent.x1();
  const double shift_y = -scene.extent.y1();
  auto shifted = [&](const Box& b) {
    return Box(b.x1() + shift_x, b.y1() + shift_y, b.x2() + shift_x,
               b.y2() + shift_y);
  };
  scene.extent = shifted(scene.extent);
  for (auto& point : scene.curve.points) {
    point.x += shift_x;
    point.y += shift_y;
  }
  for (auto& gt : scene.gt_boxes) gt.box = shifted(gt.box);
  for (auto& det : scene.det_boxes) det.box = shifted(det.box);

  return scene;
}

}  // namespace coveval

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
#include <string>
#include <vector>

#include "coveval/box.hpp"
#include "coveval/fractal.hpp"
#include "coveval/matching.hpp"

namespace coveval {

/// Simulated-detector noise model. Detections are derived from the
/// ground-truth tiling:
///   - each ground truth is dropped entirely with probability drop_out;
///   - each kept ground truth spawns `duplication` detections;
///   - a detection is a square of side u * box_size with
///     u ~ U(scale_lo, scale_hi), centered on its ground truth plus a
///     uniform offset of up to position_jitter * box_size per axis;
///   - `false_alarms` spurious boxes are placed outside the curve's
///     bounding box (guaranteed to overlap no ground truth);
///   - every detection draws its confidence from
///     U(confidence_lo, confidence_hi).
/// All draws come from one seeded stream in a fixed order, so scenes are
/// bit-reproducible.
struct DetectorModel {
  double scale_lo = 1.0;
  double scale_hi = 1.0;
  double position_jitter = 0.0;
  int duplication = 1;
  double drop_out = 0.0;
  int false_alarms = 0;
  double confidence_lo = 0.5;
  double confidence_hi = 1.0;

  void validate() const;  ///< throws config_error
};

/// A synthetic benchmark unit: one fractal curve, its ground-truth box
/// tiling, and simulated detections. Every ground-truth box intersects
/// the curve polyline (its center lies on it).
struct SyntheticScene {
  std::string image_id;
  std::string class_id;
  PolyCurve curve;
  Box extent;  ///< image extent (curve bounds plus padding)
  double box_size = 0.0;
  double stride = 0.0;
  DetectorModel noise;
  std::uint64_t seed = 0;
  std::vector<GroundTruth> gt_boxes;
  std::vector<Detection> det_boxes;
};

/// Tiles the curve with square ground-truth boxes of side box_size whose
/// centers sit on the polyline at arc-length steps of `stride`, then
/// simulates detections per the noise model. Throws empty_scene_error
/// when stride exceeds the curve length and config_error on bad sizes.
SyntheticScene synthesize_annotations(const PolyCurve& curve, double box_size,
                                      double stride, const DetectorModel& model,
                                      std::uint64_t seed,
                                      const std::string& image_id = "scene",
                                      const std::string& class_id = "crack");

}  // namespace coveval

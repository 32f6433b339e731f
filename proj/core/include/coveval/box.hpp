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

namespace coveval {

/// Axis-aligned rectangle in continuous image coordinates.
///
/// Coordinates are pure spans: area = (x2 - x1) * (y2 - y1), with no
/// "+1 pixel" convention. Construction enforces x1 < x2 and y1 < y2
/// strictly, so every live Box has positive area; the overlap measures
/// below never see a zero denominator.
class Box {
 public:
  /// Throws invalid_box_error unless x1 < x2 and y1 < y2 (all finite).
  Box(double x1, double y1, double x2, double y2);

  double x1() const noexcept { return x1_; }
  double y1() const noexcept { return y1_; }
  double x2() const noexcept { return x2_; }
  double y2() const noexcept { return y2_; }

  double width() const noexcept { return x2_ - x1_; }
  double height() const noexcept { return y2_ - y1_; }
  double area() const noexcept { return width() * height(); }

  bool operator==(const Box& other) const noexcept = default;

 private:
  double x1_, y1_, x2_, y2_;
};

/// Strictly positive rectangle area.
double box_area(const Box& b);

/// Overlap area of two boxes, >= 0.
///
/// Computed with the sort construction: if the boxes are disjoint
/// (strict guard on all four sides) the result is 0; otherwise sort the
/// four x coordinates and the four y coordinates and multiply the
/// middle-two spans. Edge-touching boxes pass the guard and produce a
/// zero-width span, so the result is 0, not an error.
double intersection_area(const Box& a, const Box& b);

/// Intersection over Union, in [0, 1]. Union is computed as
/// area(g) + area(d) - intersection.
double iou(const Box& g, const Box& d);

/// Cover Area rate: intersection divided by the smaller box's area,
/// in [0, 1]. Symmetric, and equal to 1 whenever one box contains the
/// other regardless of the scale ratio.
double car(const Box& g, const Box& d);

}  // namespace coveval

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

#include "coveval/box.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "coveval/errors.hpp"

namespace coveval {

Box::Box(double x1, double y1, double x2, double y2)
    : x1_(x1), y1_(y1), x2_(x2), y2_(y2) {
  if (!(std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
        std::isfinite(y2))) {
    throw invalid_box_error("box coordinates must be finite");
  }
  if (!(x1 < x2 && y1 < y2)) {
    throw invalid_box_error(
        "degenerate box: requires x1 < x2 and y1 < y2, got (" +
        std::to_string(x1) + ", " + std::to_string(y1) + ", " +
        std::to_string(x2) + ", " + std::to_string(y2) + ")");
  }
}

double box_area(const Box& b) { return b.area(); }

double intersection_area(const Box& a, const Box& b) {
  // Disjointness guard, strict on purpose: exact edge touch falls through
  // to the sort construction, whose middle span is then zero.
  if (a.x1() > b.x2() || a.y1() > b.y2() || b.x1() > a.x2() ||
      b.y1() > a.y2()) {
    return 0.0;
  }
  std::array<double, 4> xs{a.x1(), a.x2(), b.x1(), b.x2()};
  std::array<double, 4> ys{a.y1(), a.y2(), b.y1(), b.y2()};
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  return (xs[2] - xs[1]) * (ys[2] - ys[1]);
}

double iou(const Box& g, const Box& d) {
  const double inter = intersection_area(g, d);
  const double uni = g.area() + d.area() - inter;
  return inter / uni;
}

double car(const Box& g, const Box& d) {
  const double inter = intersection_area(g, d);
  return inter / std::min(g.area(), d.area());
}

}  // namespace coveval

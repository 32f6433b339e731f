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

#include <benchmark/benchmark.h>

#include <cmath>

#include "coveval/fractal.hpp"
#include "coveval/synth.hpp"

namespace {

using coveval::CurveBounds;
using coveval::DetectorModel;
using coveval::PolyCurve;
using coveval::TransformParams;

TransformParams crack_params() {
  TransformParams params;
  params.kind = TransformParams::Kind::kRandom;
  params.t_lo = 0.4;
  params.t_hi = 0.6;
  params.h_lo = -0.35;
  params.h_hi = 0.35;
  return params;
}

void BM_GenerateCurve(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(coveval::generate_curve(crack_params(), depth, 7));
  }
}
BENCHMARK(BM_GenerateCurve)->DenseRange(6, 14, 2);

void BM_BoxCountingDimension(benchmark::State& state) {
  const int depth = static_cast<int>(state.range(0));
  const PolyCurve curve = coveval::generate_curve(crack_params(), depth, 7);
  const CurveBounds bounds = coveval::curve_bounds(curve);
  const double diagonal = std::hypot(bounds.width(), bounds.height());
  const auto scales =
      coveval::geometric_scales(diagonal / 8.0, diagonal / 128.0, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coveval::estimate_fractal_dimension(curve, scales));
  }
}
BENCHMARK(BM_BoxCountingDimension)->DenseRange(6, 12, 2);

void BM_SynthesizeScene(benchmark::State& state) {
  const PolyCurve curve = coveval::generate_curve(crack_params(), 8, 7);
  DetectorModel model;
  model.duplication = 2;
  model.drop_out = 0.2;
  model.false_alarms = 2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        coveval::synthesize_annotations(curve, 0.1, 0.1, model, 11));
  }
}
BENCHMARK(BM_SynthesizeScene);

}  // namespace

BENCHMARK_MAIN();

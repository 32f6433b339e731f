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

#include <vector>

#include "coveval/box.hpp"
#include "coveval/matching.hpp"
#include "coveval/rng.hpp"

namespace {

using coveval::Box;
using coveval::CArMatrix;
using coveval::Detection;
using coveval::GroundTruth;
using coveval::Rng;

Box random_box(Rng& rng) {
  const double x1 = rng.uniform(0.0, 100.0);
  const double y1 = rng.uniform(0.0, 100.0);
  return Box(x1, y1, x1 + rng.uniform(0.5, 40.0), y1 + rng.uniform(0.5, 40.0));
}

void BM_Iou(benchmark::State& state) {
  Rng rng(1);
  const Box a = random_box(rng);
  const Box b = random_box(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coveval::iou(a, b));
  }
}
BENCHMARK(BM_Iou);

void BM_Car(benchmark::State& state) {
  Rng rng(2);
  const Box a = random_box(rng);
  const Box b = random_box(rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(coveval::car(a, b));
  }
}
BENCHMARK(BM_Car);

void BM_BuildCarMatrix(benchmark::State& state) {
  const auto boxes = static_cast<std::size_t>(state.range(0));
  Rng rng(3);
  std::vector<Detection> dets;
  std::vector<GroundTruth> gts;
  for (std::size_t i = 0; i < boxes; ++i) {
    dets.push_back(Detection{"img", "c", random_box(rng), rng.uniform01()});
    gts.push_back(GroundTruth{"img", "c", random_box(rng)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(coveval::build_car_matrix(dets, gts));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BuildCarMatrix)->RangeMultiplier(4)->Range(8, 512)->Complexity();

void BM_MultiMatch(benchmark::State& state) {
  const auto boxes = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  CArMatrix matrix(boxes, boxes);
  for (std::size_t i = 0; i < boxes; ++i) {
    for (std::size_t j = 0; j < boxes; ++j) {
      matrix.set(i, j, rng.uniform01());
    }
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(coveval::multi_match(matrix, 0.55));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_MultiMatch)->RangeMultiplier(4)->Range(8, 512)->Complexity();

void BM_GreedyOneToOne(benchmark::State& state) {
  const auto boxes = static_cast<std::size_t>(state.range(0));
  Rng rng(5);
  std::vector<Detection> dets;
  std::vector<GroundTruth> gts;
  for (std::size_t i = 0; i < boxes; ++i) {
    dets.push_back(Detection{"img", "c", random_box(rng),
                             1.0 - 0.001 * static_cast<double>(i)});
    gts.push_back(GroundTruth{"img", "c", random_box(rng)});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(coveval::greedy_one_to_one_match(dets, gts, 0.55));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_GreedyOneToOne)->RangeMultiplier(4)->Range(8, 256)->Complexity();

}  // namespace

BENCHMARK_MAIN();

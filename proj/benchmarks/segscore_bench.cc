/* Copyright 2026 The segscore Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include <algorithm>
#include <random>

#include <benchmark/benchmark.h>

#include "segscore/components.h"
#include "segscore/evaluate.h"
#include "segscore/size_loss.h"

namespace segscore {
namespace {

// Random rectangles of classes 1..num_classes-1 on background.
LabelMap RandomMask(int side, int num_classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pos(0, side - 1);
  std::uniform_int_distribution<int> extent(4, side / 4);
  std::uniform_int_distribution<int> cls(1, num_classes - 1);
  LabelMap map(side, side);
  for (int k = 0; k < 60; ++k) {
    const int x = pos(rng);
    const int y = pos(rng);
    map.FillRect(x, y, std::min(extent(rng), side - x), std::min(extent(rng), side - y),
                 static_cast<ClassId>(cls(rng)));
  }
  return map;
}

void BM_LabelComponents(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const LabelMap map = RandomMask(side, 21, 1);
  const auto policy = state.range(1) == 8 ? Connectivity::kEight : Connectivity::kFour;
  for (auto _ : state) {
    benchmark::DoNotOptimize(LabelComponents(map, policy));
  }
  state.SetItemsProcessed(state.iterations() * map.size());
}
BENCHMARK(BM_LabelComponents)->Args({512, 4})->Args({512, 8})->Args({1024, 4});

void BM_EvaluateImage(benchmark::State& state) {
  const int side = static_cast<int>(state.range(0));
  const LabelMap gt = RandomMask(side, 21, 2);
  const LabelMap pred = RandomMask(side, 21, 3);
  EvalConfig config;
  for (auto _ : state) {
    benchmark::DoNotOptimize(EvaluateImage(pred, gt, std::nullopt, config, "bench"));
  }
  state.SetItemsProcessed(state.iterations() * gt.size());
}
BENCHMARK(BM_EvaluateImage)->Arg(256)->Arg(512);

void BM_ComputeWeightMap(benchmark::State& state) {
  const LabelMap mask = RandomMask(static_cast<int>(state.range(0)), 21, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeWeightMap(mask, kDefaultTau, Connectivity::kFour));
  }
  state.SetItemsProcessed(state.iterations() * mask.size());
}
BENCHMARK(BM_ComputeWeightMap)->Arg(512);

}  // namespace
}  // namespace segscore

BENCHMARK_MAIN();

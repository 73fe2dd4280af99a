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

#include "segscore/sensitivity.h"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "segscore/errors.h"
#include "segscore/evaluate.h"
#include "segscore/metrics.h"

namespace segscore {
namespace {

constexpr int kGap = 2;

void Cover(LabelMap& pred, const Square& sq, std::int64_t pixels,
           ClassId class_id) {
  for (std::int64_t k = 0; k < pixels; ++k) {
    pred.set(sq.x + static_cast<int>(k % sq.side),
             sq.y + static_cast<int>(k / sq.side), class_id);
  }
}

EvalConfig SweepConfig(ClassId class_id, Connectivity connectivity) {
  EvalConfig config;
  config.num_classes = std::max(2, class_id + 1);
  config.ignore_id = kDefaultIgnoreId;
  config.connectivity = connectivity;
  return config;
}

SweepRow ScoreFrame(int step, const LabelMap& pred, const LabelMap& gt,
                    const InstanceSet& instances, ClassId class_id,
                    Connectivity connectivity) {
  const EvalConfig config = SweepConfig(class_id, connectivity);
  const Report report = ComputeReport(EvaluateImage(
      pred, gt, instances, config, fmt::format("step-{}", step)));
  SweepRow row;
  row.step = step;
  row.miou = report.miou.value_or(0.0);
  row.ia_miou = report.ia_miou.value_or(0.0);
  for (const ClassReport& c : report.per_class) {
    if (c.class_id != class_id) continue;
    row.class_tilde = c.tilde_iou.value_or(0.0);
    row.class_conventional = c.iou.value_or(0.0);
  }
  return row;
}

}  // namespace

CornerCase ParseCornerCase(std::string_view text) {
  if (text.size() == 1) {
    switch (text[0]) {
      case 'A': case 'a': return CornerCase::kA;
      case 'B': case 'b': return CornerCase::kB;
      case 'C': case 'c': return CornerCase::kC;
      case 'D': case 'd': return CornerCase::kD;
    }
  }
  throw DomainError(fmt::format("corner case must be A, B, C or D, got '{}'", text));
}

char ToChar(CornerCase tag) {
  return static_cast<char>('A' + static_cast<int>(tag));
}

CornerScenario MakeCornerScenario(CornerCase tag, int canvas, int large_side,
                                  int small_side, int small_count, int steps) {
  if (canvas < 1 || large_side < 1 || small_side < 1 || small_count < 0 ||
      steps < 1) {
    throw DomainError(fmt::format(
        "corner case needs positive sizes and steps (canvas {}, large {}, "
        "small {}, count {}, steps {})",
        canvas, large_side, small_side, small_count, steps));
  }
  if (large_side > canvas) {
    throw DomainError(fmt::format("large square {} does not fit canvas {}",
                                  large_side, canvas));
  }
  CornerScenario scenario;
  scenario.tag = tag;
  scenario.canvas = canvas;
  scenario.large = {0, 0, large_side};
  scenario.steps = steps;

  // Cells on a (small_side + gap) grid, skipping the large square and its
  // gap margin.
  const int pitch = small_side + kGap;
  const int reserved = large_side + kGap;
  for (int y = 0; y + small_side <= canvas &&
                  static_cast<int>(scenario.smalls.size()) < small_count;
       y += pitch) {
    for (int x = 0; x + small_side <= canvas &&
                    static_cast<int>(scenario.smalls.size()) < small_count;
         x += pitch) {
      if (x < reserved && y < reserved) continue;
      scenario.smalls.push_back({x, y, small_side});
    }
  }
  if (static_cast<int>(scenario.smalls.size()) < small_count) {
    throw DomainError(fmt::format(
        "only {} of {} small squares of side {} fit a {}x{} canvas next to a "
        "{}x{} square",
        scenario.smalls.size(), small_count, small_side, canvas, canvas,
        large_side, large_side));
  }
  return scenario;
}

std::vector<CornerFrame> GenerateCornerCase(const CornerScenario& s) {
  if (s.steps < 1) throw DomainError("corner case needs at least one step");
  LabelMap gt(s.canvas, s.canvas);
  InstanceMap ids(s.canvas, s.canvas);
  InstanceId next_id = 1;
  gt.FillRect(s.large.x, s.large.y, s.large.side, s.large.side, s.class_id);
  ids.FillRect(s.large.x, s.large.y, s.large.side, s.large.side, next_id++);
  for (const Square& sq : s.smalls) {
    gt.FillRect(sq.x, sq.y, sq.side, sq.side, s.class_id);
    ids.FillRect(sq.x, sq.y, sq.side, sq.side, next_id++);
  }

  std::vector<const Square*> growing;
  std::vector<const Square*> fixed;
  if (s.grows_large()) {
    growing.push_back(&s.large);
    for (const Square& sq : s.smalls) fixed.push_back(&sq);
  } else {
    for (const Square& sq : s.smalls) growing.push_back(&sq);
    fixed.push_back(&s.large);
  }

  std::vector<CornerFrame> frames;
  frames.reserve(s.steps + 1);
  for (int k = 0; k <= s.steps; ++k) {
    LabelMap pred(s.canvas, s.canvas);
    if (s.fixed_covered()) {
      for (const Square* sq : fixed) Cover(pred, *sq, sq->area(), s.class_id);
    }
    double coverage = 0.0;
    for (const Square* sq : growing) {
      const std::int64_t covered = k * sq->area() / s.steps;
      Cover(pred, *sq, covered, s.class_id);
      coverage = static_cast<double>(covered) / static_cast<double>(sq->area());
    }
    frames.push_back({k, coverage, std::move(pred), gt, ids});
  }
  return frames;
}

std::vector<SweepRow> RunGrowthSweep(const CornerScenario& scenario,
                                     Connectivity connectivity) {
  std::vector<SweepRow> rows;
  for (const CornerFrame& frame : GenerateCornerCase(scenario)) {
    const InstanceSet instances =
        BuildGtInstances(frame.gt, frame.instances, connectivity);
    rows.push_back(ScoreFrame(frame.step, frame.pred, frame.gt, instances,
                              scenario.class_id, connectivity));
  }
  return rows;
}

std::vector<SweepRow> RunRemovalSweep(const LabelMap& gt,
                                      const InstanceSet& instances,
                                      ClassId class_id,
                                      Connectivity connectivity) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < instances.instances.size(); ++i) {
    if (instances.instances[i].class_id == class_id) order.push_back(i);
  }
  if (order.empty()) {
    throw DomainError(fmt::format("class {} has no instance to remove", class_id));
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instances.instances[a].area() < instances.instances[b].area();
  });

  LabelMap pred = gt;
  std::vector<SweepRow> rows;
  rows.push_back(ScoreFrame(0, pred, gt, instances, class_id, connectivity));
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (PixelIndex p : instances.instances[order[k]].pixels) {
      pred.mutable_labels()[p] = kBackground;
    }
    rows.push_back(ScoreFrame(static_cast<int>(k + 1), pred, gt, instances,
                              class_id, connectivity));
  }
  return rows;
}

RemovalScene MakeRemovalScene(std::span<const int> sides, ClassId class_id) {
  if (sides.empty()) throw DomainError("removal scene needs at least one square");
  int width = kGap;
  int height = 1;
  for (int side : sides) {
    if (side < 1) throw DomainError(fmt::format("square side {} < 1", side));
    width += side + kGap;
    height = std::max(height, side);
  }
  height += 2 * kGap;
  RemovalScene scene{LabelMap(width, height), InstanceMap(width, height)};
  int x = kGap;
  InstanceId id = 1;
  for (int side : sides) {
    scene.gt.FillRect(x, kGap, side, side, class_id);
    scene.instances.FillRect(x, kGap, side, side, id++);
    x += side + kGap;
  }
  return scene;
}

std::string FormatSweepCsv(std::span<const SweepRow> rows) {
  std::string out = "step,miou,ia_miou,class_tilde,class_conventional\n";
  for (const SweepRow& r : rows) {
    out += fmt::format("{},{:.12f},{:.12f},{:.12f},{:.12f}\n", r.step, r.miou,
                       r.ia_miou, r.class_tilde, r.class_conventional);
  }
  return out;
}

}  // namespace segscore

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

#ifndef SEGSCORE_SENSITIVITY_H_
#define SEGSCORE_SENSITIVITY_H_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segscore/components.h"
#include "segscore/label_map.h"

namespace segscore {

// Synthetic scenes contrasting mIoU with the instance-aware score.
//
//   A: the large square's prediction grows, small squares stay uncovered.
//   B: the small squares' predictions grow, the large square stays covered.
//   C: the large square's prediction grows, small squares stay covered.
//   D: the small squares' predictions grow, the large square stays uncovered.
enum class CornerCase { kA, kB, kC, kD };

CornerCase ParseCornerCase(std::string_view text);
char ToChar(CornerCase tag);

struct Square {
  int x = 0;
  int y = 0;
  int side = 0;

  std::int64_t area() const { return static_cast<std::int64_t>(side) * side; }
};

struct CornerScenario {
  CornerCase tag = CornerCase::kB;
  int canvas = 200;
  Square large;
  std::vector<Square> smalls;
  ClassId class_id = 1;
  int steps = 10;

  bool grows_large() const {
    return tag == CornerCase::kA || tag == CornerCase::kC;
  }
  // Whether the targets that do not grow are predicted.
  bool fixed_covered() const {
    return tag == CornerCase::kB || tag == CornerCase::kC;
  }
};

// Places the large square at the canvas origin and the small squares on a
// grid to its right and below, two pixels apart so no two touch under
// either connectivity. Throws DomainError if they do not fit or any size or
// step count is < 1.
CornerScenario MakeCornerScenario(CornerCase tag, int canvas = 200,
                                  int large_side = 100, int small_side = 10,
                                  int small_count = 1, int steps = 10);

struct CornerFrame {
  int step = 0;
  double coverage = 0.0;  // covered fraction of each growing target
  LabelMap pred;
  LabelMap gt;
  InstanceMap instances;
};

// steps + 1 frames. At step k every growing target has its first
// floor(k * area / steps) pixels (row-major from the top-left corner)
// predicted.
std::vector<CornerFrame> GenerateCornerCase(const CornerScenario& scenario);

struct SweepRow {
  int step = 0;
  double miou = 0.0;
  double ia_miou = 0.0;
  double class_tilde = 0.0;
  double class_conventional = 0.0;
};

// Evaluates each frame on its own.
std::vector<SweepRow> RunGrowthSweep(const CornerScenario& scenario,
                                     Connectivity connectivity = Connectivity::kFour);

// Starts from a perfect prediction and erases the instances of `class_id`
// one at a time, smallest first (ties by construction index). Row k holds
// the scores after k removals. Throws DomainError if the class has no
// instance.
std::vector<SweepRow> RunRemovalSweep(const LabelMap& gt,
                                      const InstanceSet& instances,
                                      ClassId class_id,
                                      Connectivity connectivity = Connectivity::kFour);

struct RemovalScene {
  LabelMap gt;
  InstanceMap instances;
};

// Squares of the given sides, class `class_id`, laid out left to right on
// one row with a two-pixel gap and a two-pixel margin.
RemovalScene MakeRemovalScene(std::span<const int> sides, ClassId class_id = 1);

// Header "step,miou,ia_miou,class_tilde,class_conventional", reals with 12
// decimal places.
std::string FormatSweepCsv(std::span<const SweepRow> rows);

}  // namespace segscore

#endif  // SEGSCORE_SENSITIVITY_H_

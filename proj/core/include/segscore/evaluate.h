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

#ifndef SEGSCORE_EVALUATE_H_
#define SEGSCORE_EVALUATE_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <string_view>

#include "segscore/components.h"
#include "segscore/label_map.h"
#include "segscore/manifest.h"
#include "segscore/metrics.h"

namespace segscore {

// Worker count from SEGSCORE_WORKERS if set to a positive integer,
// otherwise the hardware concurrency (at least 1).
int DefaultWorkerCount();

// Runs fn(0) .. fn(n - 1) on up to `workers` threads. The first exception
// thrown by any call is rethrown after all threads have joined.
void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn);

// Scores one image. Pixels that are ignore in `gt` are removed from the
// prediction before blob extraction and from every count; a prediction
// pixel equal to the ignore id predicts no class. Throws DomainError on a
// shape mismatch or an out-of-range class id, InvariantViolation if pixel
// conservation fails.
DatasetStats EvaluateImage(const LabelMap& pred, const LabelMap& gt,
                           const InstanceSet& instances,
                           const EvalConfig& config, std::string_view image_ref);

// Builds the ground-truth instances first (from `instance_map` when given,
// otherwise connected components of `gt`).
DatasetStats EvaluateImage(const LabelMap& pred, const LabelMap& gt,
                           const std::optional<InstanceMap>& instance_map,
                           const EvalConfig& config, std::string_view image_ref);

// Loads and scores every manifest entry on `workers` threads and merges the
// per-image stats in manifest order. Failing entries are collected and
// reported together as a DatasetError.
DatasetStats EvaluateManifest(const DatasetManifest& manifest,
                              Connectivity connectivity, int workers);

}  // namespace segscore

#endif  // SEGSCORE_EVALUATE_H_

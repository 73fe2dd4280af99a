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

#include "segscore/evaluate.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "segscore/assignment.h"
#include "segscore/errors.h"
#include "segscore/mask_io.h"

namespace segscore {

int DefaultWorkerCount() {
  if (const char* env = std::getenv("SEGSCORE_WORKERS")) {
    int value = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size() && value > 0) {
      return value;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void ParallelFor(std::size_t n, int workers,
                 const std::function<void(std::size_t)>& fn) {
  const std::size_t threads =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, workers)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) error = std::current_exception();
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

DatasetStats EvaluateImage(const LabelMap& pred, const LabelMap& gt,
                           const InstanceSet& instances,
                           const EvalConfig& config,
                           std::string_view image_ref) {
  if (!pred.SameShape(gt)) {
    throw DomainError(fmt::format("'{}': prediction is {}x{} but ground truth "
                                  "is {}x{}",
                                  image_ref, pred.width(), pred.height(),
                                  gt.width(), gt.height()));
  }
  if (pred.ignore_id() != config.ignore_id || gt.ignore_id() != config.ignore_id) {
    throw DomainError(fmt::format("'{}': masks use a different ignore id than "
                                  "the evaluation config ({})",
                                  image_ref, config.ignore_id));
  }
  gt.CheckClasses(config.num_classes);
  pred.CheckClasses(config.num_classes);

  DatasetStats stats(config);
  LabelMap visible(pred.width(), pred.height(), kBackground, config.ignore_id);
  auto visible_labels = visible.mutable_labels();
  for (std::size_t p = 0; p < gt.size(); ++p) {
    if (gt.IsIgnored(p)) {
      visible_labels[p] = config.ignore_id;
      continue;
    }
    const ClassId g = gt[p];
    const ClassId q = pred[p];
    visible_labels[p] = q;
    if (q == g) {
      ++stats.at(g).true_positive;
      continue;
    }
    ++stats.at(g).false_negative;
    if (!pred.IsIgnored(p)) ++stats.at(q).false_positive;
  }

  for (const AssignmentResult& result :
       AssignImage(visible, instances, config.connectivity)) {
    ClassStats& cs = stats.at(result.class_id);
    std::int64_t assigned_total = result.unmatched_fp_count;
    for (const InstanceAssignment& a : result.instances) {
      const GtInstance& inst = instances.instances[a.instance];
      InstanceRecord record;
      record.class_id = inst.class_id;
      record.size_class = inst.size_class;
      record.image_ref = std::string(image_ref);
      record.instance_index = a.instance;
      record.intersection = a.intersection;
      record.union_count = a.assigned + inst.area() - a.intersection;
      record.iou = InstanceIou(a.intersection, a.assigned, inst.area());
      cs.records.push_back(std::move(record));
      assigned_total += a.assigned;
    }
    // The per-image confusion counts of this class are still isolated in
    // `stats`, so TP + FP is this image's predicted pixel count.
    const std::int64_t predicted = cs.true_positive + cs.false_positive;
    if (assigned_total != result.predicted_count ||
        predicted != result.predicted_count) {
      throw InvariantViolation(fmt::format(
          "'{}': class {} conservation failed (assigned {} + fp vs {} "
          "predicted, {} counted)",
          image_ref, result.class_id, assigned_total, result.predicted_count,
          predicted));
    }
  }
  return stats;
}

DatasetStats EvaluateImage(const LabelMap& pred, const LabelMap& gt,
                           const std::optional<InstanceMap>& instance_map,
                           const EvalConfig& config,
                           std::string_view image_ref) {
  return EvaluateImage(pred, gt,
                       BuildGtInstances(gt, instance_map, config.connectivity),
                       config, image_ref);
}

DatasetStats EvaluateManifest(const DatasetManifest& manifest,
                              Connectivity connectivity, int workers) {
  ValidateManifest(manifest);
  EvalConfig config;
  config.num_classes = manifest.num_classes;
  config.ignore_id = manifest.ignore_id;
  config.connectivity = connectivity;

  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<DatasetStats>> per_image(n);
  std::vector<std::string> failures(n);
  ParallelFor(n, workers, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      const LabelMap gt = LoadClassMask(entry.gt_mask_path, config.num_classes,
                                        config.ignore_id);
      const LabelMap pred = LoadClassMask(entry.pred_mask_path,
                                          config.num_classes, config.ignore_id);
      std::optional<InstanceMap> instances;
      if (entry.instance_mask_path) {
        instances = LoadInstanceMask(*entry.instance_mask_path);
      }
      per_image[i] = EvaluateImage(pred, gt, instances, config, entry.image_id);
    } catch (const InvariantViolation&) {
      throw;
    } catch (const Error& e) {
      failures[i] = fmt::format("{}: {}", entry.image_id, e.what());
    }
  });

  std::vector<std::string> messages;
  for (std::string& f : failures) {
    if (!f.empty()) messages.push_back(std::move(f));
  }
  if (!messages.empty()) throw DatasetError(std::move(messages));

  DatasetStats total(config);
  for (const auto& stats : per_image) total.Merge(*stats);
  return total;
}

}  // namespace segscore

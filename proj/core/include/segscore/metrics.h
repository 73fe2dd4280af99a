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

#ifndef SEGSCORE_METRICS_H_
#define SEGSCORE_METRICS_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segscore/label_map.h"

namespace segscore {

struct EvalConfig {
  int num_classes = 21;
  ClassId ignore_id = kDefaultIgnoreId;
  Connectivity connectivity = Connectivity::kFour;

  friend bool operator==(const EvalConfig&, const EvalConfig&) = default;
};

// One evaluated ground-truth instance. Counts are kept next to the IoU so
// reports can be recomputed exactly after merging.
struct InstanceRecord {
  ClassId class_id = kBackground;
  SizeClass size_class = SizeClass::kSmall;
  std::string image_ref;
  std::size_t instance_index = 0;  // construction index within the image
  std::int64_t intersection = 0;
  std::int64_t union_count = 0;
  double iou = 0.0;
};

// intersection / (assigned_pred + gt_area - intersection).
// Throws DomainError unless gt_area >= 1 and
// 0 <= intersection <= min(assigned_pred, gt_area).
double InstanceIou(std::int64_t intersection, std::int64_t assigned_pred,
                   std::int64_t gt_area);

// Mergeable per-class accumulator. The confusion counts drive conventional
// IoU; for class 0 they also define the pooled background segment that
// enters the instance-aware average as a single class.
struct ClassStats {
  ClassId class_id = kBackground;
  std::vector<InstanceRecord> records;
  std::int64_t true_positive = 0;
  std::int64_t false_positive = 0;
  std::int64_t false_negative = 0;

  std::int64_t union_count() const {
    return true_positive + false_positive + false_negative;
  }
  bool present() const { return union_count() > 0 || !records.empty(); }
};

// Concatenates records and sums counts. Throws DomainError if the class ids
// differ.
ClassStats MergeStats(const ClassStats& a, const ClassStats& b);

// Stats for a whole evaluation set, one ClassStats per class id.
class DatasetStats {
 public:
  explicit DatasetStats(const EvalConfig& config);

  const EvalConfig& config() const { return config_; }
  const std::vector<ClassStats>& classes() const { return classes_; }
  std::vector<ClassStats>& mutable_classes() { return classes_; }
  ClassStats& at(ClassId c) { return classes_.at(c); }
  const ClassStats& at(ClassId c) const { return classes_.at(c); }

  // Throws DomainError if the configs differ.
  void Merge(const DatasetStats& other);

 private:
  EvalConfig config_;
  std::vector<ClassStats> classes_;
};

// Mean IoU of the records, or nullopt when there are none (class absent).
std::optional<double> ClassIaIou(std::span<const InstanceRecord> records);

// Mean over the present classes' scores. Throws DomainError when empty.
double IaMiou(std::span<const double> per_class);

// For each class with at least one record of `size`, the mean IoU of those
// records; then the mean over such classes. nullopt when none qualifies.
std::optional<double> SizeStratifiedIa(std::span<const InstanceRecord> records,
                                       SizeClass size);

struct ConventionalResult {
  std::optional<double> miou;
  std::vector<std::optional<double>> per_class;  // indexed by class id
};

// Pooled TP / (TP + FP + FN) per class; classes with a zero denominator are
// left out of the mean.
ConventionalResult ConventionalMiou(std::span<const ClassStats> stats);

struct ClassReport {
  ClassId class_id = kBackground;
  std::optional<double> iou;
  std::optional<double> tilde_iou;
  std::array<std::int64_t, kNumSizeClasses> instance_counts{};
};

struct Report {
  EvalConfig config;
  std::vector<ClassReport> per_class;  // evaluated classes, ascending id
  std::optional<double> miou;
  std::optional<double> ia_miou;
  std::optional<double> ia_small;
  std::optional<double> ia_medium;
  std::optional<double> ia_large;
  std::array<std::int64_t, kNumSizeClasses> instance_totals{};
};

// Records sorted by (image_ref, instance_index), the order every sum in
// ComputeReport uses; makes the result independent of merge order.
std::vector<InstanceRecord> CanonicalRecords(const DatasetStats& stats);

Report ComputeReport(const DatasetStats& stats);

}  // namespace segscore

#endif  // SEGSCORE_METRICS_H_

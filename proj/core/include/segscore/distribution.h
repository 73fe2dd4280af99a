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

#ifndef SEGSCORE_DISTRIBUTION_H_
#define SEGSCORE_DISTRIBUTION_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "segscore/components.h"
#include "segscore/manifest.h"

namespace segscore {

// Ground-truth instance counts per class and size bucket.
class DistributionReport {
 public:
  explicit DistributionReport(int num_classes);

  int num_classes() const { return static_cast<int>(counts_.size()); }
  const std::array<std::int64_t, kNumSizeClasses>& counts(ClassId c) const {
    return counts_.at(c);
  }
  const std::array<std::int64_t, kNumSizeClasses>& totals() const {
    return totals_;
  }
  std::int64_t total() const { return totals_[0] + totals_[1] + totals_[2]; }
  // Share of each size bucket in percent; all zero for an empty report.
  std::array<double, kNumSizeClasses> percentages() const;

  void Add(const InstanceSet& instances);
  // Throws DomainError if num_classes differs.
  void Merge(const DistributionReport& other);

  friend bool operator==(const DistributionReport&,
                         const DistributionReport&) = default;

 private:
  std::vector<std::array<std::int64_t, kNumSizeClasses>> counts_;
  std::array<std::int64_t, kNumSizeClasses> totals_{};
};

// Builds instances per entry (instance mask when present, otherwise
// connected components of the class mask) and buckets them by size.
// Prediction masks are not read. Failing entries are reported together as
// a DatasetError.
DistributionReport DistributionHistogram(const DatasetManifest& manifest,
                                         Connectivity connectivity, int workers);

// {"num_classes", "per_class": [{"class_id", "small", "medium", "large"}],
//  "totals": {...}, "percentages": {...}, "total"}, 6 decimal places.
std::string FormatDistributionJson(const DistributionReport& report);
// class_id,small,medium,large rows followed by "total" and "percent" rows.
std::string FormatDistributionCsv(const DistributionReport& report);

}  // namespace segscore

#endif  // SEGSCORE_DISTRIBUTION_H_

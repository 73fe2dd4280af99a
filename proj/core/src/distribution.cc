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

#include "segscore/distribution.h"

#include <optional>

#include <fmt/format.h>

#include "segscore/errors.h"
#include "segscore/evaluate.h"
#include "segscore/mask_io.h"

namespace segscore {

DistributionReport::DistributionReport(int num_classes) {
  if (num_classes < 1) {
    throw DomainError(fmt::format("num_classes must be >= 1, got {}", num_classes));
  }
  counts_.resize(num_classes);
}

std::array<double, kNumSizeClasses> DistributionReport::percentages() const {
  std::array<double, kNumSizeClasses> out{};
  const std::int64_t n = total();
  if (n == 0) return out;
  for (int s = 0; s < kNumSizeClasses; ++s) {
    out[s] = 100.0 * static_cast<double>(totals_[s]) / static_cast<double>(n);
  }
  return out;
}

void DistributionReport::Add(const InstanceSet& instances) {
  for (const GtInstance& inst : instances.instances) {
    if (inst.class_id >= counts_.size()) {
      throw DomainError(fmt::format("instance class {} outside [0, {})",
                                    inst.class_id, counts_.size()));
    }
    const int s = static_cast<int>(inst.size_class);
    ++counts_[inst.class_id][s];
    ++totals_[s];
  }
}

void DistributionReport::Merge(const DistributionReport& other) {
  if (other.counts_.size() != counts_.size()) {
    throw DomainError("cannot merge distributions with different class counts");
  }
  for (std::size_t c = 0; c < counts_.size(); ++c) {
    for (int s = 0; s < kNumSizeClasses; ++s) counts_[c][s] += other.counts_[c][s];
  }
  for (int s = 0; s < kNumSizeClasses; ++s) totals_[s] += other.totals_[s];
}

DistributionReport DistributionHistogram(const DatasetManifest& manifest,
                                         Connectivity connectivity,
                                         int workers) {
  ValidateManifest(manifest);
  const std::size_t n = manifest.entries.size();
  std::vector<std::optional<DistributionReport>> per_image(n);
  std::vector<std::string> failures(n);
  ParallelFor(n, workers, [&](std::size_t i) {
    const ManifestEntry& entry = manifest.entries[i];
    try {
      const LabelMap gt = LoadClassMask(entry.gt_mask_path, manifest.num_classes,
                                        manifest.ignore_id);
      std::optional<InstanceMap> ids;
      if (entry.instance_mask_path) {
        ids = LoadInstanceMask(*entry.instance_mask_path);
      }
      DistributionReport report(manifest.num_classes);
      report.Add(BuildGtInstances(gt, ids, connectivity));
      per_image[i] = std::move(report);
    } catch (const Error& e) {
      failures[i] = fmt::format("{}: {}", entry.image_id, e.what());
    }
  });

  std::vector<std::string> messages;
  for (std::string& f : failures) {
    if (!f.empty()) messages.push_back(std::move(f));
  }
  if (!messages.empty()) throw DatasetError(std::move(messages));

  DistributionReport total(manifest.num_classes);
  for (const auto& report : per_image) total.Merge(*report);
  return total;
}

std::string FormatDistributionJson(const DistributionReport& report) {
  const auto& t = report.totals();
  const auto pct = report.percentages();
  std::string out = "{\n";
  out += fmt::format("  \"num_classes\": {},\n", report.num_classes());
  out += "  \"per_class\": [";
  for (int c = 0; c < report.num_classes(); ++c) {
    const auto& k = report.counts(static_cast<ClassId>(c));
    out += fmt::format(
        "{}\n    {{\"class_id\": {}, \"small\": {}, \"medium\": {}, "
        "\"large\": {}}}",
        c == 0 ? "" : ",", c, k[0], k[1], k[2]);
  }
  out += "\n  ],\n";
  out += fmt::format(
      "  \"totals\": {{\"small\": {}, \"medium\": {}, \"large\": {}}},\n", t[0],
      t[1], t[2]);
  out += fmt::format(
      "  \"percentages\": {{\"small\": {:.6f}, \"medium\": {:.6f}, "
      "\"large\": {:.6f}}},\n",
      pct[0], pct[1], pct[2]);
  out += fmt::format("  \"total\": {}\n}}\n", report.total());
  return out;
}

std::string FormatDistributionCsv(const DistributionReport& report) {
  std::string out = "class_id,small,medium,large\n";
  for (int c = 0; c < report.num_classes(); ++c) {
    const auto& k = report.counts(static_cast<ClassId>(c));
    out += fmt::format("{},{},{},{}\n", c, k[0], k[1], k[2]);
  }
  const auto& t = report.totals();
  const auto pct = report.percentages();
  out += fmt::format("total,{},{},{}\n", t[0], t[1], t[2]);
  out += fmt::format("percent,{:.6f},{:.6f},{:.6f}\n", pct[0], pct[1], pct[2]);
  return out;
}

}  // namespace segscore

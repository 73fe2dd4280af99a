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

#include "segscore/metrics.h"

#include <algorithm>
#include <map>
#include <tuple>

#include <fmt/format.h>

#include "segscore/errors.h"

namespace segscore {

double InstanceIou(std::int64_t intersection, std::int64_t assigned_pred,
                   std::int64_t gt_area) {
  if (gt_area < 1) {
    throw DomainError(fmt::format("instance area must be >= 1, got {}", gt_area));
  }
  if (intersection < 0 || intersection > assigned_pred ||
      intersection > gt_area) {
    throw DomainError(fmt::format(
        "intersection {} must lie in [0, min(assigned {}, area {})]",
        intersection, assigned_pred, gt_area));
  }
  return static_cast<double>(intersection) /
         static_cast<double>(assigned_pred + gt_area - intersection);
}

ClassStats MergeStats(const ClassStats& a, const ClassStats& b) {
  if (a.class_id != b.class_id) {
    throw DomainError(fmt::format("cannot merge stats of class {} with class {}",
                                  a.class_id, b.class_id));
  }
  ClassStats out = a;
  out.records.insert(out.records.end(), b.records.begin(), b.records.end());
  out.true_positive += b.true_positive;
  out.false_positive += b.false_positive;
  out.false_negative += b.false_negative;
  return out;
}

DatasetStats::DatasetStats(const EvalConfig& config) : config_(config) {
  if (config.num_classes < 2 || config.num_classes > 255) {
    throw DomainError(
        fmt::format("num_classes must be in [2, 255], got {}", config.num_classes));
  }
  if (config.ignore_id < config.num_classes) {
    throw DomainError(fmt::format("ignore id {} collides with a class id",
                                  config.ignore_id));
  }
  classes_.resize(config.num_classes);
  for (int c = 0; c < config.num_classes; ++c) {
    classes_[c].class_id = static_cast<ClassId>(c);
  }
}

void DatasetStats::Merge(const DatasetStats& other) {
  if (!(config_ == other.config_)) {
    throw DomainError("cannot merge stats computed with different configs");
  }
  for (std::size_t c = 0; c < classes_.size(); ++c) {
    ClassStats& mine = classes_[c];
    const ClassStats& theirs = other.classes_[c];
    mine.records.insert(mine.records.end(), theirs.records.begin(),
                        theirs.records.end());
    mine.true_positive += theirs.true_positive;
    mine.false_positive += theirs.false_positive;
    mine.false_negative += theirs.false_negative;
  }
}

std::optional<double> ClassIaIou(std::span<const InstanceRecord> records) {
  if (records.empty()) return std::nullopt;
  double sum = 0.0;
  for (const InstanceRecord& r : records) sum += r.iou;
  return sum / static_cast<double>(records.size());
}

double IaMiou(std::span<const double> per_class) {
  if (per_class.empty()) {
    throw DomainError("instance-aware mIoU needs at least one present class");
  }
  double sum = 0.0;
  for (double v : per_class) sum += v;
  return sum / static_cast<double>(per_class.size());
}

std::optional<double> SizeStratifiedIa(std::span<const InstanceRecord> records,
                                       SizeClass size) {
  std::map<ClassId, std::pair<double, std::int64_t>> per_class;
  for (const InstanceRecord& r : records) {
    if (r.size_class != size) continue;
    auto& [sum, count] = per_class[r.class_id];
    sum += r.iou;
    ++count;
  }
  if (per_class.empty()) return std::nullopt;
  double total = 0.0;
  for (const auto& [c, acc] : per_class) {
    total += acc.first / static_cast<double>(acc.second);
  }
  return total / static_cast<double>(per_class.size());
}

ConventionalResult ConventionalMiou(std::span<const ClassStats> stats) {
  ConventionalResult out;
  double sum = 0.0;
  int present = 0;
  for (const ClassStats& s : stats) {
    if (out.per_class.size() <= s.class_id) out.per_class.resize(s.class_id + 1);
    const std::int64_t denom = s.union_count();
    if (denom == 0) continue;
    const double iou =
        static_cast<double>(s.true_positive) / static_cast<double>(denom);
    out.per_class[s.class_id] = iou;
    sum += iou;
    ++present;
  }
  if (present > 0) out.miou = sum / present;
  return out;
}

std::vector<InstanceRecord> CanonicalRecords(const DatasetStats& stats) {
  std::vector<InstanceRecord> all;
  for (const ClassStats& s : stats.classes()) {
    all.insert(all.end(), s.records.begin(), s.records.end());
  }
  std::sort(all.begin(), all.end(),
            [](const InstanceRecord& a, const InstanceRecord& b) {
              return std::tie(a.image_ref, a.instance_index, a.class_id) <
                     std::tie(b.image_ref, b.instance_index, b.class_id);
            });
  return all;
}

Report ComputeReport(const DatasetStats& stats) {
  Report report;
  report.config = stats.config();

  const std::vector<InstanceRecord> records = CanonicalRecords(stats);
  std::vector<std::vector<InstanceRecord>> by_class(stats.classes().size());
  for (const InstanceRecord& r : records) by_class[r.class_id].push_back(r);

  const ConventionalResult conventional = ConventionalMiou(stats.classes());
  report.miou = conventional.miou;

  std::vector<double> tilde_values;
  for (const ClassStats& s : stats.classes()) {
    if (!s.present()) continue;
    ClassReport row;
    row.class_id = s.class_id;
    if (s.class_id < conventional.per_class.size()) {
      row.iou = conventional.per_class[s.class_id];
    }
    if (s.class_id == kBackground) {
      row.tilde_iou = row.iou;
    } else {
      row.tilde_iou = ClassIaIou(by_class[s.class_id]);
    }
    for (const InstanceRecord& r : by_class[s.class_id]) {
      ++row.instance_counts[static_cast<int>(r.size_class)];
      ++report.instance_totals[static_cast<int>(r.size_class)];
    }
    if (row.tilde_iou) tilde_values.push_back(*row.tilde_iou);
    report.per_class.push_back(row);
  }
  if (!tilde_values.empty()) report.ia_miou = IaMiou(tilde_values);
  report.ia_small = SizeStratifiedIa(records, SizeClass::kSmall);
  report.ia_medium = SizeStratifiedIa(records, SizeClass::kMedium);
  report.ia_large = SizeStratifiedIa(records, SizeClass::kLarge);
  return report;
}

}  // namespace segscore

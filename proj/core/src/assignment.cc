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

#include "segscore/assignment.h"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

#include "segscore/errors.h"

namespace segscore {
namespace {

// Overlaps between blobs and same-class instances. A negative class filter
// keeps every class.
std::vector<OverlapEntry> CountOverlaps(std::span<const Blob> blobs,
                                        const InstanceSet& instances,
                                        const std::vector<std::int32_t>& owner,
                                        int class_filter) {
  std::vector<OverlapEntry> entries;
  std::vector<std::int64_t> counts(instances.instances.size(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t b = 0; b < blobs.size(); ++b) {
    const Blob& blob = blobs[b];
    if (class_filter >= 0 && blob.class_id != class_filter) continue;
    for (PixelIndex p : blob.pixels) {
      const std::int32_t i = owner[p];
      if (i < 0 || instances.instances[i].class_id != blob.class_id) continue;
      if (counts[i]++ == 0) touched.push_back(static_cast<std::size_t>(i));
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t i : touched) {
      entries.push_back({b, i, counts[i]});
      counts[i] = 0;
    }
    touched.clear();
  }
  return entries;
}

}  // namespace

OverlapTable::OverlapTable(std::vector<OverlapEntry> entries)
    : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const OverlapEntry& a, const OverlapEntry& b) {
              return std::tie(a.blob, a.instance) < std::tie(b.blob, b.instance);
            });
}

std::int64_t OverlapTable::at(std::size_t blob, std::size_t instance) const {
  auto it = std::lower_bound(
      entries_.begin(), entries_.end(), std::pair{blob, instance},
      [](const OverlapEntry& e, const std::pair<std::size_t, std::size_t>& key) {
        return std::tie(e.blob, e.instance) < std::tie(key.first, key.second);
      });
  if (it == entries_.end() || it->blob != blob || it->instance != instance) {
    return 0;
  }
  return it->intersection;
}

std::span<const OverlapEntry> OverlapTable::ForBlob(std::size_t blob) const {
  auto lo = std::lower_bound(
      entries_.begin(), entries_.end(), blob,
      [](const OverlapEntry& e, std::size_t b) { return e.blob < b; });
  auto hi = std::upper_bound(
      lo, entries_.end(), blob,
      [](std::size_t b, const OverlapEntry& e) { return b < e.blob; });
  return {lo, hi};
}

OverlapTable ComputeOverlapTable(std::span<const Blob> blobs,
                                 const InstanceSet& instances,
                                 ClassId class_id) {
  return OverlapTable(
      CountOverlaps(blobs, instances, instances.OwnerGrid(), class_id));
}

std::vector<InstanceAllotment> ApportionCounts(
    std::int64_t blob_area, std::span<const InstanceShare> overlaps) {
  std::int64_t total = 0;
  for (const InstanceShare& s : overlaps) {
    if (s.intersection < 0) {
      throw DomainError(fmt::format("negative intersection {} for instance {}",
                                    s.intersection, s.instance));
    }
    total += s.intersection;
  }
  if (total == 0) {
    throw DomainError("blob overlaps no instance; route it to false positives");
  }
  if (blob_area > std::numeric_limits<std::int32_t>::max()) {
    throw DomainError(fmt::format("blob area {} exceeds the supported range",
                                  blob_area));
  }
  if (total > blob_area) {
    throw DomainError(fmt::format(
        "intersections sum to {} but the blob has only {} pixels", total,
        blob_area));
  }

  // Quota of instance i is U * I_i / total; keep the integer part and the
  // remainder numerator (over the common denominator `total`) exactly.
  const std::int64_t unassigned = blob_area - total;
  std::vector<InstanceAllotment> out(overlaps.size());
  std::vector<std::int64_t> remainder(overlaps.size());
  std::int64_t handed_out = 0;
  for (std::size_t k = 0; k < overlaps.size(); ++k) {
    // Both factors are below 2^31 (pixel indices are int32), so no overflow.
    const std::int64_t scaled = unassigned * overlaps[k].intersection;
    const std::int64_t floor_share = scaled / total;
    remainder[k] = scaled % total;
    out[k] = {overlaps[k].instance, overlaps[k].intersection + floor_share};
    handed_out += floor_share;
  }

  std::vector<std::size_t> order(overlaps.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
    if (overlaps[a].intersection != overlaps[b].intersection) {
      return overlaps[a].intersection > overlaps[b].intersection;
    }
    return overlaps[a].instance < overlaps[b].instance;
  });
  // Fewer leftover seats than recipients, since each remainder is < 1.
  const std::int64_t leftover = unassigned - handed_out;
  for (std::int64_t k = 0; k < leftover; ++k) ++out[order[k]].assigned;
  return out;
}

std::vector<AssignmentResult> AssignImage(const LabelMap& pred,
                                          const InstanceSet& gt_instances,
                                          Connectivity policy) {
  if (pred.width() != gt_instances.width ||
      pred.height() != gt_instances.height) {
    throw DomainError(fmt::format(
        "prediction is {}x{} but ground truth is {}x{}", pred.width(),
        pred.height(), gt_instances.width, gt_instances.height));
  }

  std::map<ClassId, AssignmentResult> by_class;
  std::vector<std::size_t> slot(gt_instances.instances.size());
  for (std::size_t i = 0; i < gt_instances.instances.size(); ++i) {
    const ClassId c = gt_instances.instances[i].class_id;
    AssignmentResult& result = by_class[c];
    result.class_id = c;
    slot[i] = result.instances.size();
    result.instances.push_back({i, 0, 0});
  }

  const std::vector<Blob> blobs = ForegroundBlobs(pred, policy);
  const OverlapTable table(
      CountOverlaps(blobs, gt_instances, gt_instances.OwnerGrid(), -1));

  std::vector<InstanceShare> shares;
  for (std::size_t b = 0; b < blobs.size(); ++b) {
    const Blob& blob = blobs[b];
    AssignmentResult& result = by_class[blob.class_id];
    result.class_id = blob.class_id;
    result.predicted_count += blob.area();

    shares.clear();
    for (const OverlapEntry& e : table.ForBlob(b)) {
      shares.push_back({e.instance, e.intersection});
    }
    if (shares.empty()) {
      result.unmatched_fp_count += blob.area();
      continue;
    }
    const auto allotments = ApportionCounts(blob.area(), shares);
    for (std::size_t k = 0; k < shares.size(); ++k) {
      InstanceAssignment& target = result.instances[slot[shares[k].instance]];
      target.assigned += allotments[k].assigned;
      target.intersection += shares[k].intersection;
    }
  }

  std::vector<AssignmentResult> out;
  out.reserve(by_class.size());
  for (auto& [c, result] : by_class) out.push_back(std::move(result));
  return out;
}

}  // namespace segscore

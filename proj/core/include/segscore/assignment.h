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

#ifndef SEGSCORE_ASSIGNMENT_H_
#define SEGSCORE_ASSIGNMENT_H_

#include <cstdint>
#include <span>
#include <vector>

#include "segscore/components.h"
#include "segscore/label_map.h"

namespace segscore {

// Shared-pixel count between one prediction blob and one GT instance.
struct OverlapEntry {
  std::size_t blob = 0;      // index into the blob sequence
  std::size_t instance = 0;  // index into InstanceSet::instances
  std::int64_t intersection = 0;

  friend bool operator==(const OverlapEntry&, const OverlapEntry&) = default;
};

// Sparse (blob, instance) -> intersection table, sorted by (blob, instance).
// Pairs not present have zero intersection.
class OverlapTable {
 public:
  OverlapTable() = default;
  explicit OverlapTable(std::vector<OverlapEntry> entries);

  std::int64_t at(std::size_t blob, std::size_t instance) const;
  std::span<const OverlapEntry> entries() const { return entries_; }
  // Entries of one blob, contiguous because of the sort order.
  std::span<const OverlapEntry> ForBlob(std::size_t blob) const;

 private:
  std::vector<OverlapEntry> entries_;
};

// Only pairs with matching class contribute; `class_id` restricts both
// sides when the inputs hold several classes.
OverlapTable ComputeOverlapTable(std::span<const Blob> blobs,
                                 const InstanceSet& instances,
                                 ClassId class_id);

struct InstanceShare {
  std::size_t instance = 0;  // construction index, used for tie-breaking
  std::int64_t intersection = 0;
};

struct InstanceAllotment {
  std::size_t instance = 0;
  std::int64_t assigned = 0;

  friend bool operator==(const InstanceAllotment&,
                         const InstanceAllotment&) = default;
};

// Splits a blob of `blob_area` pixels among the instances it touches: each
// keeps its intersection, and the U = blob_area - sum(intersections)
// leftover pixels are apportioned proportionally to the intersections by
// the largest-remainder method. Remainder ties go to the larger
// intersection, then to the smaller instance index. The assigned counts
// always sum to blob_area. Output order follows `overlaps`.
// Throws DomainError if every intersection is zero, any is negative, or
// they sum to more than blob_area.
std::vector<InstanceAllotment> ApportionCounts(
    std::int64_t blob_area, std::span<const InstanceShare> overlaps);

struct InstanceAssignment {
  std::size_t instance = 0;
  std::int64_t assigned = 0;
  std::int64_t intersection = 0;
};

// Assignment of one class's prediction pixels in one image.
struct AssignmentResult {
  ClassId class_id = kBackground;
  // One entry per GT instance of this class, in construction order.
  std::vector<InstanceAssignment> instances;
  // Pixels of blobs that touch no instance of this class.
  std::int64_t unmatched_fp_count = 0;
  // All predicted pixels of this class (non-ignore).
  std::int64_t predicted_count = 0;
};

// Splits `pred` into blobs per foreground class and distributes each blob
// over the GT instances of the same class it overlaps. Contributions of
// several blobs to one instance add up. Results are returned for every
// foreground class that has instances or predicted pixels, sorted by
// class id. Throws DomainError on shape mismatch.
std::vector<AssignmentResult> AssignImage(const LabelMap& pred,
                                          const InstanceSet& gt_instances,
                                          Connectivity policy);

}  // namespace segscore

#endif  // SEGSCORE_ASSIGNMENT_H_

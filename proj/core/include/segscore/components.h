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

#ifndef SEGSCORE_COMPONENTS_H_
#define SEGSCORE_COMPONENTS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "segscore/label_map.h"

namespace segscore {

// Linear row-major pixel index (y * width + x).
using PixelIndex = std::int32_t;

// A maximal connected set of same-class pixels. `pixels` is sorted
// ascending, so pixels.front() is the blob's first pixel in raster order.
struct Blob {
  ClassId class_id = kBackground;
  std::vector<PixelIndex> pixels;

  std::int64_t area() const { return static_cast<std::int64_t>(pixels.size()); }
};

struct GtInstance {
  int instance_id = 0;  // unique within (image, class)
  ClassId class_id = kBackground;
  std::vector<PixelIndex> pixels;  // sorted ascending
  SizeClass size_class = SizeClass::kSmall;

  std::int64_t area() const { return static_cast<std::int64_t>(pixels.size()); }
};

// Ground-truth instances of a single image, ordered by first pixel in
// raster order. An instance's position in `instances` is its construction
// index and is used for deterministic tie-breaking downstream.
struct InstanceSet {
  int width = 0;
  int height = 0;
  std::vector<GtInstance> instances;

  // Per-pixel index into `instances`, or -1 where no instance covers it.
  std::vector<std::int32_t> OwnerGrid() const;
};

// Component id per pixel for every non-ignore class of a map at once.
// Components are numbered in raster order of their first pixel.
struct ComponentLabeling {
  int width = 0;
  int height = 0;
  std::vector<std::int32_t> component;  // -1 on ignore pixels
  std::vector<ClassId> component_class;
  std::vector<std::int64_t> component_area;

  std::size_t num_components() const { return component_class.size(); }
};

// Two-pass union-find labeling of all non-ignore pixels.
ComponentLabeling LabelComponents(const LabelMap& map, Connectivity policy);

// Blobs of one class, ordered by first pixel. Throws DomainError if
// class_id is the map's ignore id.
std::vector<Blob> ConnectedComponents(const LabelMap& map, ClassId class_id,
                                      Connectivity policy);

// Blobs of every foreground class in a single labeling pass; same order
// as LabelComponents (raster order of first pixel across classes).
std::vector<Blob> ForegroundBlobs(const LabelMap& map, Connectivity policy);

// Without an instance map: one instance per connected component of every
// foreground class. With one: one instance per distinct nonzero id.
// Throws AnnotationMismatch if an annotated pixel is background or ignore
// in `gt`, or if one id spans several classes; DomainError on shape
// mismatch.
InstanceSet BuildGtInstances(const LabelMap& gt,
                             const std::optional<InstanceMap>& instance_map,
                             Connectivity policy);

}  // namespace segscore

#endif  // SEGSCORE_COMPONENTS_H_

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

#include "segscore/label_map.h"

#include <algorithm>
#include <string>

#include <fmt/format.h>

#include "segscore/errors.h"

namespace segscore {

Connectivity ParseConnectivity(std::string_view text) {
  if (text == "4" || text == "four") return Connectivity::kFour;
  if (text == "8" || text == "eight") return Connectivity::kEight;
  throw DomainError(fmt::format("connectivity must be 4 or 8, got '{}'", text));
}

std::string_view ToString(Connectivity connectivity) {
  return connectivity == Connectivity::kFour ? "4" : "8";
}

SizeClass ClassifySize(std::int64_t area) {
  if (area < 1) {
    throw DomainError(fmt::format("instance area must be >= 1, got {}", area));
  }
  if (area < kSmallAreaLimit) return SizeClass::kSmall;
  if (area < kMediumAreaLimit) return SizeClass::kMedium;
  return SizeClass::kLarge;
}

std::string_view ToString(SizeClass size) {
  switch (size) {
    case SizeClass::kSmall:
      return "small";
    case SizeClass::kMedium:
      return "medium";
    case SizeClass::kLarge:
      return "large";
  }
  return "?";
}

LabelMap::LabelMap(int width, int height, ClassId fill, ClassId ignore_id)
    : width_(width), height_(height), ignore_id_(ignore_id) {
  if (width < 1 || height < 1) {
    throw DomainError(
        fmt::format("label map must be at least 1x1, got {}x{}", width, height));
  }
  labels_.assign(static_cast<std::size_t>(width) * height, fill);
}

LabelMap::LabelMap(int width, int height, std::vector<ClassId> labels,
                   ClassId ignore_id)
    : width_(width),
      height_(height),
      ignore_id_(ignore_id),
      labels_(std::move(labels)) {
  if (width < 1 || height < 1) {
    throw DomainError(
        fmt::format("label map must be at least 1x1, got {}x{}", width, height));
  }
  if (labels_.size() != static_cast<std::size_t>(width) * height) {
    throw DomainError(fmt::format("label map {}x{} needs {} entries, got {}",
                                  width, height,
                                  static_cast<std::size_t>(width) * height,
                                  labels_.size()));
  }
}

void LabelMap::FillRect(int x0, int y0, int w, int h, ClassId value) {
  const int x_begin = std::max(0, x0);
  const int y_begin = std::max(0, y0);
  const int x_end = std::min(width_, x0 + w);
  const int y_end = std::min(height_, y0 + h);
  for (int y = y_begin; y < y_end; ++y) {
    for (int x = x_begin; x < x_end; ++x) labels_[Index(x, y)] = value;
  }
}

void LabelMap::CheckClasses(int num_classes) const {
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    const ClassId v = labels_[i];
    if (v != ignore_id_ && v >= num_classes) {
      throw DomainError(fmt::format(
          "class id {} at ({}, {}) is outside [0, {})", v,
          i % static_cast<std::size_t>(width_),
          i / static_cast<std::size_t>(width_), num_classes));
    }
  }
}

void InstanceMap::FillRect(int x0, int y0, int w, int h, InstanceId id) {
  const int x_begin = std::max(0, x0);
  const int y_begin = std::max(0, y0);
  const int x_end = std::min(width, x0 + w);
  const int y_end = std::min(height, y0 + h);
  for (int y = y_begin; y < y_end; ++y) {
    for (int x = x_begin; x < x_end; ++x) set(x, y, id);
  }
}

}  // namespace segscore

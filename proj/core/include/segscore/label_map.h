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

#ifndef SEGSCORE_LABEL_MAP_H_
#define SEGSCORE_LABEL_MAP_H_

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace segscore {

using ClassId = std::uint8_t;
using InstanceId = std::uint16_t;

inline constexpr ClassId kBackground = 0;
inline constexpr ClassId kDefaultIgnoreId = 255;

enum class Connectivity { kFour, kEight };

// Parses "4" / "8" (also "four" / "eight"); throws DomainError otherwise.
Connectivity ParseConnectivity(std::string_view text);
std::string_view ToString(Connectivity connectivity);

// Size buckets over ground-truth instance area, following the COCO
// convention: small below 32x32 pixels, medium below 96x96, large otherwise.
enum class SizeClass { kSmall = 0, kMedium = 1, kLarge = 2 };

inline constexpr std::int64_t kSmallAreaLimit = 32 * 32;
inline constexpr std::int64_t kMediumAreaLimit = 96 * 96;
inline constexpr int kNumSizeClasses = 3;

// Throws DomainError for area < 1.
SizeClass ClassifySize(std::int64_t area);
std::string_view ToString(SizeClass size);

// Dense 2-D grid of class ids, row-major. Class 0 is background; pixels
// equal to ignore_id take part in no computation.
class LabelMap {
 public:
  LabelMap(int width, int height, ClassId fill = kBackground,
           ClassId ignore_id = kDefaultIgnoreId);
  LabelMap(int width, int height, std::vector<ClassId> labels,
           ClassId ignore_id = kDefaultIgnoreId);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return labels_.size(); }
  ClassId ignore_id() const { return ignore_id_; }

  ClassId at(int x, int y) const { return labels_[Index(x, y)]; }
  void set(int x, int y, ClassId value) { labels_[Index(x, y)] = value; }
  ClassId operator[](std::size_t index) const { return labels_[index]; }

  std::span<const ClassId> labels() const { return labels_; }
  std::span<ClassId> mutable_labels() { return labels_; }

  bool IsIgnored(std::size_t index) const {
    return labels_[index] == ignore_id_;
  }

  // Fills the axis-aligned rectangle [x0, x0+w) x [y0, y0+h), clipped.
  void FillRect(int x0, int y0, int w, int h, ClassId value);

  // Throws DomainError if any non-ignore entry is >= num_classes.
  void CheckClasses(int num_classes) const;

  bool SameShape(const LabelMap& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const LabelMap&, const LabelMap&) = default;

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  ClassId ignore_id_;
  std::vector<ClassId> labels_;
};

// Per-pixel instance ids of one image; 0 means "no instance".
struct InstanceMap {
  int width = 0;
  int height = 0;
  std::vector<InstanceId> ids;

  InstanceMap() = default;
  InstanceMap(int w, int h)
      : width(w), height(h), ids(static_cast<std::size_t>(w) * h, 0) {}

  InstanceId at(int x, int y) const {
    return ids[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, InstanceId id) {
    ids[static_cast<std::size_t>(y) * width + x] = id;
  }
  void FillRect(int x0, int y0, int w, int h, InstanceId id);

  friend bool operator==(const InstanceMap&, const InstanceMap&) = default;
};

}  // namespace segscore

#endif  // SEGSCORE_LABEL_MAP_H_

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

#include "segscore/components.h"

#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "segscore/errors.h"

namespace segscore {
namespace {

class DisjointSets {
 public:
  std::int32_t Add() {
    const auto id = static_cast<std::int32_t>(parent_.size());
    parent_.push_back(id);
    return id;
  }

  std::int32_t Find(std::int32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller root so provisional labels stay raster-ordered.
  std::int32_t Union(std::int32_t a, std::int32_t b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return a;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return a;
  }

  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::int32_t> parent_;
};

// Labels every pixel for which `include(index)` holds; neighbours join when
// they carry the same class id.
template <typename Include>
ComponentLabeling LabelImpl(const LabelMap& map, Connectivity policy,
                            Include include) {
  const int w = map.width();
  const int h = map.height();
  const auto labels = map.labels();

  ComponentLabeling out;
  out.width = w;
  out.height = h;
  out.component.assign(map.size(), -1);
  auto& provisional = out.component;
  DisjointSets sets;

  const bool eight = policy == Connectivity::kEight;
  for (int y = 0; y < h; ++y) {
    const std::size_t row = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const std::size_t p = row + x;
      if (!include(p)) continue;
      const ClassId c = labels[p];
      std::int32_t label = -1;
      auto visit = [&](std::size_t q) {
        if (provisional[q] < 0 || labels[q] != c) return;
        label = label < 0 ? provisional[q] : sets.Union(label, provisional[q]);
      };
      if (x > 0) visit(p - 1);
      if (y > 0) {
        const std::size_t up = p - w;
        visit(up);
        if (eight) {
          if (x > 0) visit(up - 1);
          if (x + 1 < w) visit(up + 1);
        }
      }
      provisional[p] = label < 0 ? sets.Add() : label;
    }
  }

  std::vector<std::int32_t> final_id(sets.size(), -1);
  for (std::size_t p = 0; p < provisional.size(); ++p) {
    if (provisional[p] < 0) continue;
    const std::int32_t root = sets.Find(provisional[p]);
    if (final_id[root] < 0) {
      final_id[root] = static_cast<std::int32_t>(out.component_class.size());
      out.component_class.push_back(labels[p]);
      out.component_area.push_back(0);
    }
    provisional[p] = final_id[root];
    ++out.component_area[final_id[root]];
  }
  return out;
}

std::vector<Blob> CollectBlobs(const ComponentLabeling& labeling,
                               ClassId skip_class) {
  std::vector<std::int32_t> blob_of(labeling.num_components(), -1);
  std::vector<Blob> blobs;
  for (std::size_t k = 0; k < labeling.num_components(); ++k) {
    if (labeling.component_class[k] == skip_class) continue;
    blob_of[k] = static_cast<std::int32_t>(blobs.size());
    Blob blob;
    blob.class_id = labeling.component_class[k];
    blob.pixels.reserve(labeling.component_area[k]);
    blobs.push_back(std::move(blob));
  }
  for (std::size_t p = 0; p < labeling.component.size(); ++p) {
    const std::int32_t k = labeling.component[p];
    if (k < 0 || blob_of[k] < 0) continue;
    blobs[blob_of[k]].pixels.push_back(static_cast<PixelIndex>(p));
  }
  return blobs;
}

}  // namespace

std::vector<std::int32_t> InstanceSet::OwnerGrid() const {
  std::vector<std::int32_t> owner(static_cast<std::size_t>(width) * height, -1);
  for (std::size_t i = 0; i < instances.size(); ++i) {
    for (PixelIndex p : instances[i].pixels) {
      owner[p] = static_cast<std::int32_t>(i);
    }
  }
  return owner;
}

ComponentLabeling LabelComponents(const LabelMap& map, Connectivity policy) {
  return LabelImpl(map, policy,
                   [&](std::size_t p) { return !map.IsIgnored(p); });
}

std::vector<Blob> ConnectedComponents(const LabelMap& map, ClassId class_id,
                                      Connectivity policy) {
  if (class_id == map.ignore_id()) {
    throw DomainError(
        fmt::format("class id {} is the ignore id of this map", class_id));
  }
  const auto labels = map.labels();
  const auto labeling = LabelImpl(
      map, policy, [&](std::size_t p) { return labels[p] == class_id; });
  // Every labelled component has class_id; skip nothing.
  return CollectBlobs(labeling, map.ignore_id());
}

std::vector<Blob> ForegroundBlobs(const LabelMap& map, Connectivity policy) {
  const auto labels = map.labels();
  const auto labeling = LabelImpl(map, policy, [&](std::size_t p) {
    return labels[p] != kBackground && !map.IsIgnored(p);
  });
  return CollectBlobs(labeling, kBackground);
}

InstanceSet BuildGtInstances(const LabelMap& gt,
                             const std::optional<InstanceMap>& instance_map,
                             Connectivity policy) {
  InstanceSet set;
  set.width = gt.width();
  set.height = gt.height();

  if (!instance_map) {
    std::unordered_map<ClassId, int> next_id;
    for (Blob& blob : ForegroundBlobs(gt, policy)) {
      GtInstance inst;
      inst.instance_id = ++next_id[blob.class_id];
      inst.class_id = blob.class_id;
      inst.size_class = ClassifySize(blob.area());
      inst.pixels = std::move(blob.pixels);
      set.instances.push_back(std::move(inst));
    }
    return set;
  }

  const InstanceMap& ids = *instance_map;
  if (ids.width != gt.width() || ids.height != gt.height()) {
    throw DomainError(fmt::format(
        "instance map is {}x{} but class mask is {}x{}", ids.width, ids.height,
        gt.width(), gt.height()));
  }
  std::unordered_map<InstanceId, std::size_t> index_of;
  for (std::size_t p = 0; p < ids.ids.size(); ++p) {
    const InstanceId id = ids.ids[p];
    if (id == 0) continue;
    const ClassId c = gt[p];
    const int x = static_cast<int>(p % gt.width());
    const int y = static_cast<int>(p / gt.width());
    if (c == kBackground || gt.IsIgnored(p)) {
      throw AnnotationMismatch(fmt::format(
          "instance {} covers pixel ({}, {}) whose class is {}", id, x, y,
          c == kBackground ? std::string("background") : std::string("ignore")));
    }
    auto [it, inserted] = index_of.try_emplace(id, set.instances.size());
    if (inserted) {
      GtInstance inst;
      inst.instance_id = id;
      inst.class_id = c;
      set.instances.push_back(std::move(inst));
    }
    GtInstance& inst = set.instances[it->second];
    if (inst.class_id != c) {
      throw AnnotationMismatch(fmt::format(
          "instance {} spans classes {} and {} (at pixel ({}, {}))", id,
          inst.class_id, c, x, y));
    }
    inst.pixels.push_back(static_cast<PixelIndex>(p));
  }
  for (GtInstance& inst : set.instances) {
    inst.size_class = ClassifySize(inst.area());
  }
  return set;
}

}  // namespace segscore

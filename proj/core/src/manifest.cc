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

#include "segscore/manifest.h"

#include <fstream>
#include <set>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "segscore/errors.h"

namespace segscore {
namespace {

using nlohmann::json;

std::filesystem::path Resolve(const std::filesystem::path& base,
                              const std::string& raw) {
  std::filesystem::path p(raw);
  return p.is_relative() ? base / p : p;
}

}  // namespace

void ValidateManifest(const DatasetManifest& manifest) {
  if (manifest.num_classes < 2 || manifest.num_classes > 255) {
    throw DomainError(fmt::format("num_classes must be in [2, 255], got {}",
                                  manifest.num_classes));
  }
  if (manifest.ignore_id < manifest.num_classes) {
    throw DomainError(fmt::format("ignore_id {} collides with class ids [0, {})",
                                  manifest.ignore_id, manifest.num_classes));
  }
  std::set<std::string> seen;
  for (const ManifestEntry& e : manifest.entries) {
    if (e.image_id.empty()) throw DomainError("manifest entry without image_id");
    if (!seen.insert(e.image_id).second) {
      throw DomainError(fmt::format("duplicate image_id '{}'", e.image_id));
    }
    if (e.gt_mask_path.empty() || e.pred_mask_path.empty() ||
        (e.instance_mask_path && e.instance_mask_path->empty())) {
      throw DomainError(
          fmt::format("entry '{}' has an empty mask path", e.image_id));
    }
  }
}

DatasetManifest LoadManifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError(fmt::format("cannot open manifest '{}'", path.string()));
  }
  const std::filesystem::path base = path.parent_path();
  DatasetManifest manifest;
  try {
    const json doc = json::parse(in);
    manifest.num_classes = doc.at("num_classes").get<int>();
    if (doc.contains("ignore_id")) {
      const int ignore = doc.at("ignore_id").get<int>();
      if (ignore < 0 || ignore > 255) {
        throw FormatError(fmt::format("ignore_id {} is not in [0, 255]", ignore));
      }
      manifest.ignore_id = static_cast<ClassId>(ignore);
    }
    for (const json& item : doc.at("entries")) {
      ManifestEntry entry;
      entry.image_id = item.at("image_id").get<std::string>();
      entry.gt_mask_path = Resolve(base, item.at("gt_mask_path").get<std::string>());
      entry.pred_mask_path =
          Resolve(base, item.at("pred_mask_path").get<std::string>());
      if (item.contains("instance_mask_path") &&
          !item.at("instance_mask_path").is_null()) {
        entry.instance_mask_path =
            Resolve(base, item.at("instance_mask_path").get<std::string>());
      }
      manifest.entries.push_back(std::move(entry));
    }
    ValidateManifest(manifest);
  } catch (const json::exception& e) {
    throw FormatError(
        fmt::format("manifest '{}' is malformed: {}", path.string(), e.what()));
  } catch (const DomainError& e) {
    throw FormatError(
        fmt::format("manifest '{}' is invalid: {}", path.string(), e.what()));
  }
  return manifest;
}

void WriteManifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest) {
  json doc;
  doc["num_classes"] = manifest.num_classes;
  doc["ignore_id"] = manifest.ignore_id;
  json entries = json::array();
  for (const ManifestEntry& e : manifest.entries) {
    json item;
    item["image_id"] = e.image_id;
    item["gt_mask_path"] = e.gt_mask_path.string();
    item["pred_mask_path"] = e.pred_mask_path.string();
    if (e.instance_mask_path) {
      item["instance_mask_path"] = e.instance_mask_path->string();
    }
    entries.push_back(std::move(item));
  }
  doc["entries"] = std::move(entries);
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out << doc.dump(2) << '\n';
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

}  // namespace segscore

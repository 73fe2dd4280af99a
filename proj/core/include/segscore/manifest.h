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

#ifndef SEGSCORE_MANIFEST_H_
#define SEGSCORE_MANIFEST_H_

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segscore/label_map.h"

namespace segscore {

struct ManifestEntry {
  std::string image_id;
  std::filesystem::path gt_mask_path;
  std::filesystem::path pred_mask_path;
  std::optional<std::filesystem::path> instance_mask_path;
};

// JSON on disk:
//   {"entries": [{"image_id": ..., "gt_mask_path": ..., "pred_mask_path": ...,
//                 "instance_mask_path": ...}, ...],
//    "num_classes": 21, "ignore_id": 255}
// "instance_mask_path" and "ignore_id" are optional. Relative paths are
// resolved against the manifest's directory.
struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  int num_classes = 21;
  ClassId ignore_id = kDefaultIgnoreId;
};

// Throws DomainError on duplicate image ids, empty paths or
// num_classes outside [2, 255).
void ValidateManifest(const DatasetManifest& manifest);

// Throws IoError if unreadable, FormatError on malformed JSON or schema.
DatasetManifest LoadManifest(const std::filesystem::path& path);

// Paths are written as given.
void WriteManifest(const std::filesystem::path& path,
                   const DatasetManifest& manifest);

}  // namespace segscore

#endif  // SEGSCORE_MANIFEST_H_

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

#ifndef SEGSCORE_MASK_IO_H_
#define SEGSCORE_MASK_IO_H_

#include <cstdint>
#include <filesystem>
#include <span>

#include "segscore/label_map.h"

namespace segscore {

// Loads an 8-bit grayscale or palette-indexed PNG whose stored index is the
// class id (VOC convention). Stored value 255 becomes `ignore_id`.
// Throws IoError if the file cannot be read, FormatError for an unsupported
// colour type or bit depth, or for an index >= num_classes (the message
// names the value and its pixel).
LabelMap LoadClassMask(const std::filesystem::path& path, int num_classes,
                       ClassId ignore_id = kDefaultIgnoreId);

// Writes a palette PNG using the VOC colour map; ignore pixels are stored
// as 255.
void WriteClassMask(const std::filesystem::path& path, const LabelMap& map);

// Loads a 16-bit grayscale PNG of instance ids (0 = none). Any other
// format is a FormatError.
InstanceMap LoadInstanceMask(const std::filesystem::path& path);

void WriteInstanceMask(const std::filesystem::path& path,
                       const InstanceMap& map);

// Plain 8-bit grayscale PNG, used for weight-map previews.
void WriteGray8Png(const std::filesystem::path& path, int width, int height,
                   std::span<const std::uint8_t> pixels);

}  // namespace segscore

#endif  // SEGSCORE_MASK_IO_H_

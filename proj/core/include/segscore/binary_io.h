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

#ifndef SEGSCORE_BINARY_IO_H_
#define SEGSCORE_BINARY_IO_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "segscore/size_loss.h"

namespace segscore {

// Raw little-endian float32 sidecars.
//
// Weight map: u32 width, u32 height, then width * height floats, row-major.
// Parameter vector: u32 length, then `length` floats.
//
// Decoders throw FormatError on truncated input, trailing bytes, or a zero
// dimension; loaders additionally throw IoError when the file is unreadable.

std::vector<std::byte> EncodeWeightMap(const WeightMap& map);
// `tau` of the result is the largest stored weight (at least 1), since the
// file does not record the clamp.
WeightMap DecodeWeightMap(std::span<const std::byte> bytes);

std::vector<std::byte> EncodeParamVector(const ParamVector& params);
ParamVector DecodeParamVector(std::span<const std::byte> bytes);

void WriteWeightMap(const std::filesystem::path& path, const WeightMap& map);
WeightMap LoadWeightMap(const std::filesystem::path& path);

// 8-bit preview: round(255 * w / tau).
void WriteWeightPreview(const std::filesystem::path& path, const WeightMap& map);

void WriteParamVector(const std::filesystem::path& path,
                      const ParamVector& params);
ParamVector LoadParamVector(const std::filesystem::path& path);

// A Fisher diagonal shares the parameter-vector format; sample_count is not
// stored and loads as 0.
void WriteFisherDiagonal(const std::filesystem::path& path,
                         const FisherDiagonal& fisher);
FisherDiagonal LoadFisherDiagonal(const std::filesystem::path& path);

std::vector<std::byte> ReadFileBytes(const std::filesystem::path& path);
void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::byte> bytes);

}  // namespace segscore

#endif  // SEGSCORE_BINARY_IO_H_

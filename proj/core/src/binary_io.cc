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

#include "segscore/binary_io.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "segscore/errors.h"
#include "segscore/mask_io.h"

namespace segscore {
namespace {

void PutU32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) {
    out.push_back(static_cast<std::byte>((v >> shift) & 0xffu));
  }
}

std::uint32_t GetU32(std::span<const std::byte> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int k = 0; k < 4; ++k) {
    v |= static_cast<std::uint32_t>(bytes[offset + k]) << (8 * k);
  }
  return v;
}

void PutFloats(std::vector<std::byte>& out, std::span<const float> values) {
  for (float f : values) PutU32(out, std::bit_cast<std::uint32_t>(f));
}

std::vector<float> GetFloats(std::span<const std::byte> bytes,
                             std::size_t offset, std::size_t count) {
  std::vector<float> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::bit_cast<float>(GetU32(bytes, offset + 4 * i));
  }
  return out;
}

void ExpectPayload(std::string_view what, std::size_t header,
                   std::uint64_t floats, std::size_t actual) {
  const std::uint64_t expected = header + 4 * floats;
  if (actual < expected) {
    throw FormatError(fmt::format(
        "{} is truncated: header promises {} floats ({} bytes) but only {} "
        "bytes are present",
        what, floats, expected, actual));
  }
  if (actual > expected) {
    throw FormatError(fmt::format(
        "{} header mismatch: expected {} bytes, found {} ({} trailing)", what,
        expected, actual, actual - expected));
  }
}

}  // namespace

std::vector<std::byte> EncodeWeightMap(const WeightMap& map) {
  if (map.weights.size() != static_cast<std::size_t>(map.width) * map.height) {
    throw DomainError("weight map size does not match its dimensions");
  }
  std::vector<std::byte> out;
  out.reserve(8 + 4 * map.weights.size());
  PutU32(out, static_cast<std::uint32_t>(map.width));
  PutU32(out, static_cast<std::uint32_t>(map.height));
  PutFloats(out, map.weights);
  return out;
}

WeightMap DecodeWeightMap(std::span<const std::byte> bytes) {
  if (bytes.size() < 8) {
    throw FormatError(fmt::format(
        "weight map is truncated: {} bytes, header needs 8", bytes.size()));
  }
  const std::uint32_t w = GetU32(bytes, 0);
  const std::uint32_t h = GetU32(bytes, 4);
  if (w == 0 || h == 0 || w > 0x7fffffffu || h > 0x7fffffffu) {
    throw FormatError(fmt::format("weight map has invalid size {}x{}", w, h));
  }
  const std::uint64_t count = static_cast<std::uint64_t>(w) * h;
  ExpectPayload("weight map", 8, count, bytes.size());
  WeightMap map;
  map.width = static_cast<int>(w);
  map.height = static_cast<int>(h);
  map.weights = GetFloats(bytes, 8, count);
  float max_weight = 1.0f;
  for (float v : map.weights) max_weight = std::max(max_weight, v);
  map.tau = max_weight;
  return map;
}

std::vector<std::byte> EncodeParamVector(const ParamVector& params) {
  std::vector<std::byte> out;
  out.reserve(4 + 4 * params.size());
  PutU32(out, static_cast<std::uint32_t>(params.size()));
  PutFloats(out, params.values);
  return out;
}

ParamVector DecodeParamVector(std::span<const std::byte> bytes) {
  if (bytes.size() < 4) {
    throw FormatError(fmt::format(
        "parameter vector is truncated: {} bytes, header needs 4",
        bytes.size()));
  }
  const std::uint32_t n = GetU32(bytes, 0);
  ExpectPayload("parameter vector", 4, n, bytes.size());
  ParamVector out{GetFloats(bytes, 4, n)};
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (!std::isfinite(out.values[i])) {
      throw FormatError(fmt::format("parameter {} is not finite", i));
    }
  }
  return out;
}

std::vector<std::byte> ReadFileBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  }
  std::vector<char> raw((std::istreambuf_iterator<char>(in)),
                        std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(fmt::format("cannot read '{}'", path.string()));
  std::vector<std::byte> out(raw.size());
  std::transform(raw.begin(), raw.end(), out.begin(),
                 [](char c) { return static_cast<std::byte>(c); });
  return out;
}

void WriteFileBytes(const std::filesystem::path& path,
                    std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
}

void WriteWeightMap(const std::filesystem::path& path, const WeightMap& map) {
  WriteFileBytes(path, EncodeWeightMap(map));
}

WeightMap LoadWeightMap(const std::filesystem::path& path) {
  try {
    return DecodeWeightMap(ReadFileBytes(path));
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

void WriteWeightPreview(const std::filesystem::path& path,
                        const WeightMap& map) {
  std::vector<std::uint8_t> pixels(map.weights.size());
  for (std::size_t p = 0; p < pixels.size(); ++p) {
    const double scaled = 255.0 * map.weights[p] / map.tau;
    pixels[p] = static_cast<std::uint8_t>(
        std::clamp(std::lround(scaled), 0L, 255L));
  }
  WriteGray8Png(path, map.width, map.height, pixels);
}

void WriteParamVector(const std::filesystem::path& path,
                      const ParamVector& params) {
  WriteFileBytes(path, EncodeParamVector(params));
}

ParamVector LoadParamVector(const std::filesystem::path& path) {
  try {
    return DecodeParamVector(ReadFileBytes(path));
  } catch (const FormatError& e) {
    throw FormatError(fmt::format("'{}': {}", path.string(), e.what()));
  }
}

void WriteFisherDiagonal(const std::filesystem::path& path,
                         const FisherDiagonal& fisher) {
  ParamVector narrowed;
  narrowed.values.reserve(fisher.values.size());
  for (double v : fisher.values) narrowed.values.push_back(static_cast<float>(v));
  WriteParamVector(path, narrowed);
}

FisherDiagonal LoadFisherDiagonal(const std::filesystem::path& path) {
  const ParamVector raw = LoadParamVector(path);
  FisherDiagonal out;
  out.values.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw.values[i] < 0.0f) {
      throw FormatError(fmt::format("'{}': Fisher entry {} is negative ({})",
                                    path.string(), i, raw.values[i]));
    }
    out.values.push_back(raw.values[i]);
  }
  return out;
}

}  // namespace segscore

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

#include "segscore/mask_io.h"

#include <png.h>

#include <csetjmp>
#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "segscore/errors.h"

namespace segscore {
namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr OpenFile(const std::filesystem::path& path, const char* mode) {
  FilePtr file(std::fopen(path.c_str(), mode));
  if (!file) {
    throw IoError(fmt::format("cannot open '{}' for {}", path.string(),
                              mode[0] == 'r' ? "reading" : "writing"));
  }
  return file;
}

// libpng reports errors by longjmp. Everything the jump could skip lives in
// this struct, owned by the caller, so no destructor is bypassed.
struct PngState {
  std::string error;
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  std::size_t row_bytes = 0;
  std::vector<png_byte> data;
  std::vector<png_bytep> rows;
};

void OnPngError(png_structp png, png_const_charp message) {
  auto* state = static_cast<PngState*>(png_get_error_ptr(png));
  state->error = message;
  png_longjmp(png, 1);
}

void OnPngWarning(png_structp, png_const_charp) {}

// Returns false (with state.error set) on a libpng failure. Palette images
// are unpacked to one index per byte; other data is left as stored.
bool ReadPngRaw(std::FILE* file, PngState& state) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &state,
                                           OnPngError, OnPngWarning);
  if (png == nullptr) {
    state.error = "out of memory";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    state.error = "out of memory";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, file);
  png_read_info(png, info);
  state.width = png_get_image_width(png, info);
  state.height = png_get_image_height(png, info);
  state.bit_depth = png_get_bit_depth(png, info);
  state.color_type = png_get_color_type(png, info);
  if (state.color_type == PNG_COLOR_TYPE_PALETTE && state.bit_depth < 8) {
    png_set_packing(png);
  }
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  state.row_bytes = png_get_rowbytes(png, info);
  state.data.resize(state.row_bytes * state.height);
  state.rows.resize(state.height);
  for (png_uint_32 y = 0; y < state.height; ++y) {
    state.rows[y] = state.data.data() + y * state.row_bytes;
  }
  png_read_image(png, state.rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

PngState ReadPng(const std::filesystem::path& path) {
  FilePtr file = OpenFile(path, "rb");
  png_byte signature[8] = {};
  if (std::fread(signature, 1, sizeof(signature), file.get()) !=
          sizeof(signature) ||
      png_sig_cmp(signature, 0, sizeof(signature)) != 0) {
    throw FormatError(fmt::format("'{}' is not a PNG file", path.string()));
  }
  std::rewind(file.get());
  PngState state;
  if (!ReadPngRaw(file.get(), state)) {
    throw FormatError(
        fmt::format("cannot decode '{}': {}", path.string(), state.error));
  }
  return state;
}

struct PngImageSpec {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  int color_type = PNG_COLOR_TYPE_GRAY;
  const std::vector<png_color>* palette = nullptr;
};

bool WritePngRaw(std::FILE* file, const PngImageSpec& spec, PngState& state) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &state,
                                            OnPngError, OnPngWarning);
  if (png == nullptr) {
    state.error = "out of memory";
    return false;
  }
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    state.error = "out of memory";
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, file);
  png_set_IHDR(png, info, static_cast<png_uint_32>(spec.width),
               static_cast<png_uint_32>(spec.height), spec.bit_depth,
               spec.color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  if (spec.palette != nullptr) {
    png_set_PLTE(png, info, spec.palette->data(),
                 static_cast<int>(spec.palette->size()));
  }
  png_write_info(png, info);
  png_write_image(png, state.rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

void WritePng(const std::filesystem::path& path, const PngImageSpec& spec,
              std::vector<png_byte> data) {
  PngState state;
  state.row_bytes = data.size() / static_cast<std::size_t>(spec.height);
  state.data = std::move(data);
  state.rows.resize(spec.height);
  for (int y = 0; y < spec.height; ++y) {
    state.rows[y] = state.data.data() + y * state.row_bytes;
  }
  FilePtr file = OpenFile(path, "wb");
  if (!WritePngRaw(file.get(), spec, state)) {
    throw IoError(
        fmt::format("cannot write '{}': {}", path.string(), state.error));
  }
  if (std::fflush(file.get()) != 0) {
    throw IoError(fmt::format("cannot write '{}'", path.string()));
  }
}

const std::vector<png_color>& VocPalette() {
  static const std::vector<png_color> palette = [] {
    std::vector<png_color> colors(256);
    for (int i = 0; i < 256; ++i) {
      int r = 0, g = 0, b = 0, c = i;
      for (int j = 0; j < 8; ++j) {
        r |= ((c >> 0) & 1) << (7 - j);
        g |= ((c >> 1) & 1) << (7 - j);
        b |= ((c >> 2) & 1) << (7 - j);
        c >>= 3;
      }
      colors[i] = {static_cast<png_byte>(r), static_cast<png_byte>(g),
                   static_cast<png_byte>(b)};
    }
    return colors;
  }();
  return palette;
}

std::string ColorTypeName(int color_type) {
  switch (color_type) {
    case PNG_COLOR_TYPE_GRAY:
      return "grayscale";
    case PNG_COLOR_TYPE_PALETTE:
      return "palette";
    case PNG_COLOR_TYPE_RGB:
      return "RGB";
    case PNG_COLOR_TYPE_RGB_ALPHA:
      return "RGBA";
    case PNG_COLOR_TYPE_GRAY_ALPHA:
      return "grayscale+alpha";
  }
  return fmt::format("color type {}", color_type);
}

}  // namespace

LabelMap LoadClassMask(const std::filesystem::path& path, int num_classes,
                       ClassId ignore_id) {
  PngState png = ReadPng(path);
  const bool gray8 =
      png.color_type == PNG_COLOR_TYPE_GRAY && png.bit_depth == 8;
  const bool palette = png.color_type == PNG_COLOR_TYPE_PALETTE;
  if (!gray8 && !palette) {
    throw FormatError(fmt::format(
        "'{}' is a {}-bit {} image; class masks must be 8-bit grayscale or "
        "palette-indexed",
        path.string(), png.bit_depth, ColorTypeName(png.color_type)));
  }
  const auto w = static_cast<int>(png.width);
  const auto h = static_cast<int>(png.height);
  std::vector<ClassId> labels(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const png_byte* row = png.rows[y];
    for (int x = 0; x < w; ++x) {
      ClassId v = row[x];
      if (v == kDefaultIgnoreId || v == ignore_id) {
        v = ignore_id;
      } else if (v >= num_classes) {
        throw FormatError(fmt::format(
            "'{}': class index {} at ({}, {}) is not below num_classes {}",
            path.string(), v, x, y, num_classes));
      }
      labels[static_cast<std::size_t>(y) * w + x] = v;
    }
  }
  return LabelMap(w, h, std::move(labels), ignore_id);
}

void WriteClassMask(const std::filesystem::path& path, const LabelMap& map) {
  std::vector<png_byte> data(map.labels().begin(), map.labels().end());
  for (std::size_t p = 0; p < data.size(); ++p) {
    if (map.IsIgnored(p)) data[p] = kDefaultIgnoreId;
  }
  PngImageSpec spec;
  spec.width = map.width();
  spec.height = map.height();
  spec.color_type = PNG_COLOR_TYPE_PALETTE;
  spec.palette = &VocPalette();
  WritePng(path, spec, std::move(data));
}

InstanceMap LoadInstanceMask(const std::filesystem::path& path) {
  PngState png = ReadPng(path);
  if (png.color_type != PNG_COLOR_TYPE_GRAY || png.bit_depth != 16) {
    throw FormatError(fmt::format(
        "'{}' is a {}-bit {} image; instance masks must be 16-bit grayscale",
        path.string(), png.bit_depth, ColorTypeName(png.color_type)));
  }
  InstanceMap out(static_cast<int>(png.width), static_cast<int>(png.height));
  for (int y = 0; y < out.height; ++y) {
    const png_byte* row = png.rows[y];
    for (int x = 0; x < out.width; ++x) {
      // PNG stores 16-bit samples big-endian.
      out.set(x, y, static_cast<InstanceId>((row[2 * x] << 8) | row[2 * x + 1]));
    }
  }
  return out;
}

void WriteInstanceMask(const std::filesystem::path& path,
                       const InstanceMap& map) {
  std::vector<png_byte> data(map.ids.size() * 2);
  for (std::size_t p = 0; p < map.ids.size(); ++p) {
    data[2 * p] = static_cast<png_byte>(map.ids[p] >> 8);
    data[2 * p + 1] = static_cast<png_byte>(map.ids[p] & 0xff);
  }
  PngImageSpec spec;
  spec.width = map.width;
  spec.height = map.height;
  spec.bit_depth = 16;
  WritePng(path, spec, std::move(data));
}

void WriteGray8Png(const std::filesystem::path& path, int width, int height,
                   std::span<const std::uint8_t> pixels) {
  if (pixels.size() != static_cast<std::size_t>(width) * height) {
    throw DomainError(fmt::format("{}x{} image needs {} pixels, got {}", width,
                                  height,
                                  static_cast<std::size_t>(width) * height,
                                  pixels.size()));
  }
  PngImageSpec spec;
  spec.width = width;
  spec.height = height;
  WritePng(path, spec, std::vector<png_byte>(pixels.begin(), pixels.end()));
}

}  // namespace segscore

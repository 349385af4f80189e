// Copyright 2026 The LQPAT Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lqpat {

/// Row-major 8-bit intensity raster. Immutable once constructed.
///
/// Coordinates in this class are zero-based (row, col). The windowed access
/// below uses one-based (i, j) to match how window origins are reported.
class GrayImage {
 public:
  GrayImage() = default;
  /// Throws DimensionError when either dimension is zero or
  /// `pixels.size() != width * height`.
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels);

  std::size_t width() const { return width_; }
  std::size_t height() const { return height_; }
  bool empty() const { return pixels_.empty(); }

  std::uint8_t at(std::size_t row, std::size_t col) const { return pixels_[row * width_ + col]; }
  std::span<const std::uint8_t> row(std::size_t r) const {
    return {pixels_.data() + r * width_, width_};
  }
  std::span<const std::uint8_t> pixels() const { return pixels_; }

  friend bool operator==(const GrayImage&, const GrayImage&) = default;

 private:
  std::size_t width_ = 0;
  std::size_t height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
};

/// BT.601 luma, round-half-up: round(0.299 R + 0.587 G + 0.114 B).
std::uint8_t luma(Rgb px);

/// Converts a row-major RGB raster. Throws DimensionError on an empty raster
/// or a size mismatch.
GrayImage to_grayscale(std::size_t width, std::size_t height, std::span<const Rgb> rgb);

using Block4 = std::array<std::uint8_t, 16>;

inline constexpr std::size_t kWindowSize = 4;

/// Number of valid 4x4 window origins, (M-3)(N-3), or 0 for undersized images.
std::size_t window4_count(std::size_t width, std::size_t height);

/// The 4x4 block whose top-left (reference) pixel is at one-based (i, j).
/// Valid for 1 <= i <= M-3 and 1 <= j <= N-3; throws IndexError otherwise.
Block4 window4(const GrayImage& img, std::size_t i, std::size_t j);

// ---------------------------------------------------------------------------
// File IO

/// Decodes PNG, JPEG, BMP or PGM/PPM from memory. Color inputs are reduced
/// with `luma`. Throws IoError when the bytes cannot be decoded.
GrayImage decode_image(std::span<const std::uint8_t> bytes);

GrayImage read_image(const std::filesystem::path& path);

/// Binary PGM: "P5 <width> <height> 255" header, then raw bytes.
std::vector<std::uint8_t> encode_pgm(const GrayImage& img);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);

}  // namespace lqpat

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

#include "lqpat/image.hpp"

#include <string>
#include <utility>

#include "lqpat/error.hpp"

namespace lqpat {

GrayImage::GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width == 0 || height == 0) {
    throw DimensionError("image dimensions must be non-zero, got " + std::to_string(width) + "x" +
                         std::to_string(height));
  }
  if (pixels_.size() != width * height) {
    throw DimensionError("pixel count " + std::to_string(pixels_.size()) + " does not match " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
}

std::uint8_t luma(Rgb px) {
  // Integer form of the BT.601 weights; +500 rounds half up, the max is 255.
  const unsigned v = 299u * px.r + 587u * px.g + 114u * px.b + 500u;
  return static_cast<std::uint8_t>(v / 1000u);
}

GrayImage to_grayscale(std::size_t width, std::size_t height, std::span<const Rgb> rgb) {
  if (width == 0 || height == 0 || rgb.empty()) {
    throw DimensionError("cannot convert an empty raster to grayscale");
  }
  if (rgb.size() != width * height) {
    throw DimensionError("rgb pixel count " + std::to_string(rgb.size()) + " does not match " +
                         std::to_string(width) + "x" + std::to_string(height));
  }
  std::vector<std::uint8_t> out(rgb.size());
  for (std::size_t k = 0; k < rgb.size(); ++k) out[k] = luma(rgb[k]);
  return GrayImage(width, height, std::move(out));
}

std::size_t window4_count(std::size_t width, std::size_t height) {
  if (width < kWindowSize || height < kWindowSize) return 0;
  return (height - 3) * (width - 3);
}

Block4 window4(const GrayImage& img, std::size_t i, std::size_t j) {
  const std::size_t m = img.height();
  const std::size_t n = img.width();
  if (m < kWindowSize || n < kWindowSize) {
    throw IndexError("image " + std::to_string(n) + "x" + std::to_string(m) +
                     " has no 4x4 window (minimum 4x4)");
  }
  if (i < 1) throw IndexError("window row i=" + std::to_string(i) + " is below 1");
  if (j < 1) throw IndexError("window column j=" + std::to_string(j) + " is below 1");
  if (i > m - 3) {
    throw IndexError("window row i=" + std::to_string(i) + " exceeds M-3=" + std::to_string(m - 3));
  }
  if (j > n - 3) {
    throw IndexError("window column j=" + std::to_string(j) +
                     " exceeds N-3=" + std::to_string(n - 3));
  }
  Block4 block{};
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < 4; ++c) {
      block[r * 4 + c] = img.at(i - 1 + r, j - 1 + c);
    }
  }
  return block;
}

}  // namespace lqpat

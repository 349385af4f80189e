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

// Local pattern descriptors: LQPAT (4x4 window, two 8-bit codes per window)
// and the 3x3 baselines LBP and CSLBP.
//
// LQPAT splits each 4x4 window into four 2x2 blocks, visited in the cycle
//
//     red (top-left) -> green (top-right) -> blue (bottom-right)
//         -> purple (bottom-left) -> red
//
// and compares each block pixel-wise with the next. The red->green and
// green->blue comparisons form code A (high and low nibble); blue->purple and
// purple->red form code B. The two code planes are histogrammed separately
// and concatenated into a 512-bin feature vector.

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqpat/image.hpp"
#include "lqpat/simd.hpp"

namespace lqpat {

enum class DescriptorKind { kLqpat, kLbp, kCslbp };

std::string_view descriptor_name(DescriptorKind kind);
/// Accepts the exact lowercase names "lqpat", "lbp", "cslbp".
std::optional<DescriptorKind> parse_descriptor(std::string_view name);

struct DescriptorSpec {
  DescriptorKind kind = DescriptorKind::kLqpat;
  /// Neighbor threshold for LBP/CSLBP. Ignored by LQPAT.
  int threshold = 0;
  bool normalize = true;

  friend bool operator==(const DescriptorSpec&, const DescriptorSpec&) = default;
};

/// Histogram length: 512 for LQPAT, 256 for LBP, 16 for CSLBP.
std::size_t bin_count(DescriptorKind kind);

/// Side length of the pixel neighborhood a code is computed from (4 or 3).
std::size_t window_extent(DescriptorKind kind);

// ---------------------------------------------------------------------------
// Bit encoders

/// Order encoder used by LQPAT: 0 if e <= f, else 1.
constexpr std::uint8_t encode_order(std::uint8_t e, std::uint8_t f) { return e <= f ? 0 : 1; }

/// Threshold encoder used by LBP/CSLBP: 1 if nbr - ref > t, else 0.
constexpr std::uint8_t encode_threshold(std::uint8_t ref, std::uint8_t nbr, int t) {
  return static_cast<int>(nbr) - static_cast<int>(ref) > t ? 1 : 0;
}

struct QuadrupleCodes {
  std::uint8_t a = 0;  ///< red->green nibble << 4 | green->blue nibble
  std::uint8_t b = 0;  ///< blue->purple nibble << 4 | purple->red nibble

  friend bool operator==(const QuadrupleCodes&, const QuadrupleCodes&) = default;
};

/// Codes for one 4x4 block given in row-major order.
QuadrupleCodes lqpat_codes(const Block4& block);

/// Overload for callers holding a flat buffer; throws DimensionError unless
/// the span has exactly 16 entries.
QuadrupleCodes lqpat_codes(std::span<const std::uint8_t> block);

/// 8-bit LBP at zero-based (row, col). Neighbors start at top-left and run
/// clockwise; the top-left neighbor is the most significant bit. Throws
/// IndexError for border centers and ArgumentError for a negative threshold.
std::uint8_t lbp_code(const GrayImage& img, std::size_t row, std::size_t col, int threshold = 0);

/// 4-bit center-symmetric LBP at zero-based (row, col). Bits compare the
/// opposite neighbor pairs (TL,BR), (T,B), (TR,BL), (R,L), first pair most
/// significant.
std::uint8_t cslbp_code(const GrayImage& img, std::size_t row, std::size_t col, int threshold = 0);

// ---------------------------------------------------------------------------
// Feature images and vectors

/// Raster of per-window codes, row-major.
struct CodeImage {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<std::uint8_t> codes;

  std::uint8_t at(std::size_t row, std::size_t col) const { return codes[row * width + col]; }
  friend bool operator==(const CodeImage&, const CodeImage&) = default;
};

struct FeatureImageSet {
  DescriptorKind kind = DescriptorKind::kLqpat;
  /// LQPAT: {A-image, B-image}, each (M-3)x(N-3). LBP/CSLBP: one (M-2)x(N-2).
  std::vector<CodeImage> images;

  friend bool operator==(const FeatureImageSet&, const FeatureImageSet&) = default;
};

struct FeatureVector {
  std::vector<double> bins;
  bool normalized = false;

  std::size_t size() const { return bins.size(); }
  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

/// Thread-safe tally of encoder comparisons.
class ComparisonCounter {
 public:
  void add(std::uint64_t n) { total_.fetch_add(n, std::memory_order_relaxed); }
  std::uint64_t total() const { return total_.load(std::memory_order_relaxed); }
  void reset() { total_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<std::uint64_t> total_{0};
};

/// Execution knobs that never change results.
struct ExtractOptions {
  /// Kernel set to run; defaults to simd::active_isa().
  std::optional<simd::Isa> isa;
  /// Receives the number of comparisons performed, if set.
  ComparisonCounter* counter = nullptr;
};

/// Smallest width/height the descriptor accepts (4 for LQPAT, 3 otherwise).
std::size_t min_image_side(DescriptorKind kind);

/// Throws DimensionError naming the minimum size if `img` is too small.
void require_min_size(const GrayImage& img, DescriptorKind kind);

FeatureImageSet feature_images(const GrayImage& img, const DescriptorSpec& spec,
                               const ExtractOptions& options = {});

/// Concatenated per-plane histograms, L1-normalized when spec.normalize.
FeatureVector extract(const GrayImage& img, const DescriptorSpec& spec,
                      const ExtractOptions& options = {});

/// Comparisons a full extraction performs on a width x height image:
/// 16 per window for LQPAT, 8 per center for LBP, 4 per center for CSLBP.
std::uint64_t count_comparisons(const DescriptorSpec& spec, std::size_t width, std::size_t height);

}  // namespace lqpat

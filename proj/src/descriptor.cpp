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

#include "lqpat/descriptor.hpp"

#include <algorithm>
#include <array>
#include <string>

#include "kernels/kernels.hpp"
#include "lqpat/error.hpp"

namespace lqpat {
namespace {

std::uint8_t clamp_threshold(int t) {
  if (t < 0) throw ArgumentError("threshold must be >= 0, got " + std::to_string(t));
  return static_cast<std::uint8_t>(std::min(t, 255));
}

const kernels::KernelTable& kernels_for(const ExtractOptions& options) {
  return kernels::table_for(options.isa.value_or(simd::active_isa()));
}

// Calls `sink(plane_rows...)` once per output row with the encoded codes.
// Row buffers are reused so histogramming never materializes whole images.
template <typename Sink>
std::uint64_t encode_rows(const GrayImage& img, const DescriptorSpec& spec,
                          const kernels::KernelTable& k, Sink&& sink) {
  const std::size_t ext = window_extent(spec.kind);
  const std::size_t out_w = img.width() - ext + 1;
  const std::size_t out_h = img.height() - ext + 1;
  std::uint64_t comparisons = 0;
  if (spec.kind == DescriptorKind::kLqpat) {
    std::vector<std::uint8_t> a(out_w);
    std::vector<std::uint8_t> b(out_w);
    for (std::size_t i = 0; i < out_h; ++i) {
      const std::uint8_t* rows[4] = {img.row(i).data(), img.row(i + 1).data(),
                                     img.row(i + 2).data(), img.row(i + 3).data()};
      comparisons += k.lqpat_row(rows, out_w, a.data(), b.data());
      sink(i, std::span<const std::uint8_t>(a), std::span<const std::uint8_t>(b));
    }
  } else {
    const std::uint8_t t = clamp_threshold(spec.threshold);
    const auto row_fn = spec.kind == DescriptorKind::kLbp ? k.lbp_row : k.cslbp_row;
    std::vector<std::uint8_t> codes(out_w);
    for (std::size_t i = 0; i < out_h; ++i) {
      const std::uint8_t* rows[3] = {img.row(i).data(), img.row(i + 1).data(),
                                     img.row(i + 2).data()};
      comparisons += row_fn(rows, out_w, t, codes.data());
      sink(i, std::span<const std::uint8_t>(codes), std::span<const std::uint8_t>());
    }
  }
  return comparisons;
}

void require_interior(const GrayImage& img, std::size_t row, std::size_t col) {
  if (img.width() < 3 || img.height() < 3) {
    throw IndexError("image " + std::to_string(img.width()) + "x" + std::to_string(img.height()) +
                     " has no interior pixel");
  }
  if (row < 1 || row > img.height() - 2) {
    throw IndexError("center row " + std::to_string(row) + " outside [1, " +
                     std::to_string(img.height() - 2) + "]");
  }
  if (col < 1 || col > img.width() - 2) {
    throw IndexError("center column " + std::to_string(col) + " outside [1, " +
                     std::to_string(img.width() - 2) + "]");
  }
}

// Neighbors R1..R8: top-left, then clockwise.
std::array<std::uint8_t, 8> ring_of(const GrayImage& img, std::size_t r, std::size_t c) {
  return {img.at(r - 1, c - 1), img.at(r - 1, c), img.at(r - 1, c + 1), img.at(r, c + 1),
          img.at(r + 1, c + 1), img.at(r + 1, c), img.at(r + 1, c - 1), img.at(r, c - 1)};
}

}  // namespace

std::string_view descriptor_name(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::kLqpat:
      return "lqpat";
    case DescriptorKind::kLbp:
      return "lbp";
    case DescriptorKind::kCslbp:
      return "cslbp";
  }
  return "unknown";
}

std::optional<DescriptorKind> parse_descriptor(std::string_view name) {
  for (auto kind : {DescriptorKind::kLqpat, DescriptorKind::kLbp, DescriptorKind::kCslbp}) {
    if (descriptor_name(kind) == name) return kind;
  }
  return std::nullopt;
}

std::size_t bin_count(DescriptorKind kind) {
  switch (kind) {
    case DescriptorKind::kLqpat:
      return 512;
    case DescriptorKind::kLbp:
      return 256;
    case DescriptorKind::kCslbp:
      return 16;
  }
  return 0;
}

std::size_t window_extent(DescriptorKind kind) { return kind == DescriptorKind::kLqpat ? 4 : 3; }

std::size_t min_image_side(DescriptorKind kind) { return window_extent(kind); }

void require_min_size(const GrayImage& img, DescriptorKind kind) {
  const std::size_t min = min_image_side(kind);
  if (img.width() < min || img.height() < min) {
    throw DimensionError(std::string(descriptor_name(kind)) + " needs at least a " +
                         std::to_string(min) + "x" + std::to_string(min) + " image, got " +
                         std::to_string(img.width()) + "x" + std::to_string(img.height()));
  }
}

QuadrupleCodes lqpat_codes(const Block4& block) {
  const std::uint8_t* rows[4] = {block.data(), block.data() + 4, block.data() + 8,
                                 block.data() + 12};
  QuadrupleCodes codes;
  kernels::scalar::lqpat_row(rows, 1, &codes.a, &codes.b);
  return codes;
}

QuadrupleCodes lqpat_codes(std::span<const std::uint8_t> block) {
  if (block.size() != 16) {
    throw DimensionError("lqpat block must hold 16 intensities, got " +
                         std::to_string(block.size()));
  }
  Block4 b{};
  std::copy(block.begin(), block.end(), b.begin());
  return lqpat_codes(b);
}

std::uint8_t lbp_code(const GrayImage& img, std::size_t row, std::size_t col, int threshold) {
  require_interior(img, row, col);
  if (threshold < 0) throw ArgumentError("threshold must be >= 0");
  const std::uint8_t ref = img.at(row, col);
  const auto ring = ring_of(img, row, col);
  unsigned code = 0;
  for (auto nbr : ring) code = code << 1 | encode_threshold(ref, nbr, threshold);
  return static_cast<std::uint8_t>(code);
}

std::uint8_t cslbp_code(const GrayImage& img, std::size_t row, std::size_t col, int threshold) {
  require_interior(img, row, col);
  if (threshold < 0) throw ArgumentError("threshold must be >= 0");
  const auto ring = ring_of(img, row, col);
  unsigned code = 0;
  for (int k = 0; k < 4; ++k) code = code << 1 | encode_threshold(ring[k], ring[k + 4], threshold);
  return static_cast<std::uint8_t>(code);
}

FeatureImageSet feature_images(const GrayImage& img, const DescriptorSpec& spec,
                               const ExtractOptions& options) {
  require_min_size(img, spec.kind);
  const auto& k = kernels_for(options);
  const std::size_t ext = window_extent(spec.kind);
  const std::size_t out_w = img.width() - ext + 1;
  const std::size_t out_h = img.height() - ext + 1;
  const std::size_t planes = spec.kind == DescriptorKind::kLqpat ? 2 : 1;

  FeatureImageSet set;
  set.kind = spec.kind;
  set.images.assign(planes, CodeImage{out_w, out_h, std::vector<std::uint8_t>(out_w * out_h)});
  const auto comparisons = encode_rows(
      img, spec, k,
      [&](std::size_t i, std::span<const std::uint8_t> first,
          std::span<const std::uint8_t> second) {
        std::copy(first.begin(), first.end(), set.images[0].codes.begin() + i * out_w);
        if (planes == 2) {
          std::copy(second.begin(), second.end(), set.images[1].codes.begin() + i * out_w);
        }
      });
  if (options.counter != nullptr) options.counter->add(comparisons);
  return set;
}

FeatureVector extract(const GrayImage& img, const DescriptorSpec& spec,
                      const ExtractOptions& options) {
  require_min_size(img, spec.kind);
  const auto& k = kernels_for(options);
  const bool two_planes = spec.kind == DescriptorKind::kLqpat;
  std::array<std::uint64_t, 512> counts{};
  std::uint64_t total = 0;
  const auto comparisons = encode_rows(
      img, spec, k,
      [&](std::size_t, std::span<const std::uint8_t> first, std::span<const std::uint8_t> second) {
        for (auto code : first) ++counts[code];
        total += first.size();
        if (two_planes) {
          for (auto code : second) ++counts[256 + code];
          total += second.size();
        }
      });
  if (options.counter != nullptr) options.counter->add(comparisons);

  FeatureVector fv;
  fv.normalized = spec.normalize;
  fv.bins.resize(bin_count(spec.kind));
  const double denom = spec.normalize ? static_cast<double>(total) : 1.0;
  for (std::size_t i = 0; i < fv.bins.size(); ++i) {
    fv.bins[i] = static_cast<double>(counts[i]) / denom;
  }
  return fv;
}

std::uint64_t count_comparisons(const DescriptorSpec& spec, std::size_t width, std::size_t height) {
  const std::size_t ext = window_extent(spec.kind);
  if (width < ext || height < ext) return 0;
  const std::uint64_t sites = static_cast<std::uint64_t>(width - ext + 1) * (height - ext + 1);
  switch (spec.kind) {
    case DescriptorKind::kLqpat:
      return 16 * sites;
    case DescriptorKind::kLbp:
      return 8 * sites;
    case DescriptorKind::kCslbp:
      return 4 * sites;
  }
  return 0;
}

}  // namespace lqpat

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

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lqpat/descriptor.hpp"
#include "lqpat/labeled.hpp"
#include "lqpat/simd.hpp"

namespace lqpat {

/// Chi-square histogram distance, 0.5 * sum (x-y)^2 / (x+y), with empty
/// (0/0) bins contributing nothing. Bins must be non-negative. Throws
/// DimensionError when lengths differ.
///
/// Every kernel set returns the bit-identical value for the same inputs.
double chi_square(std::span<const double> x, std::span<const double> y,
                  std::optional<simd::Isa> isa = std::nullopt);
double chi_square(const FeatureVector& x, const FeatureVector& y,
                  std::optional<simd::Isa> isa = std::nullopt);

struct RankedEntry {
  std::string id;
  std::size_t gallery_index = 0;  ///< position in the input gallery
  double distance = 0.0;
  std::size_t rank = 0;  ///< 1-based
};

struct RankedRetrieval {
  std::string query_id;
  std::vector<RankedEntry> entries;  ///< ascending distance
};

/// Orders `order` (indices into distances) by ascending distance; ties keep
/// input order.
void stable_rank(std::span<const double> distances, std::vector<std::size_t>& order);

/// Sorts the gallery by ascending chi-square distance to the probe, ties
/// broken by gallery order. Throws ArgumentError on an empty gallery.
RankedRetrieval rank_gallery(const FeatureVector& probe, std::span<const LabeledFeature> gallery,
                             std::string query_id = {});

/// Label of the rank-1 gallery entry.
std::string classify_1nn(const FeatureVector& probe, std::span<const LabeledFeature> gallery);

}  // namespace lqpat

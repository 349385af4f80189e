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

#include "lqpat/similarity.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "kernels/kernels.hpp"
#include "lqpat/error.hpp"
#include "lqpat/parallel.hpp"

namespace lqpat {

double chi_square(std::span<const double> x, std::span<const double> y,
                  std::optional<simd::Isa> isa) {
  if (x.size() != y.size()) {
    throw DimensionError("chi_square: bin counts differ (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  }
  const auto& k = kernels::table_for(isa.value_or(simd::active_isa()));
  return k.chi_square(x.data(), y.data(), x.size());
}

double chi_square(const FeatureVector& x, const FeatureVector& y, std::optional<simd::Isa> isa) {
  return chi_square(std::span<const double>(x.bins), std::span<const double>(y.bins), isa);
}

void stable_rank(std::span<const double> distances, std::vector<std::size_t>& order) {
  std::stable_sort(order.begin(), order.end(), [&distances](std::size_t a, std::size_t b) {
    return distances[a] < distances[b];
  });
}

RankedRetrieval rank_gallery(const FeatureVector& probe, std::span<const LabeledFeature> gallery,
                             std::string query_id) {
  if (gallery.empty()) throw ArgumentError("rank_gallery: gallery is empty");
  for (const auto& g : gallery) {
    if (g.payload.size() != probe.size()) {
      throw DimensionError("rank_gallery: '" + g.id + "' has " + std::to_string(g.payload.size()) +
                           " bins, probe has " + std::to_string(probe.size()));
    }
  }
  const auto& k = kernels::table_for(simd::active_isa());
  std::vector<double> distances(gallery.size());
  parallel::for_each_index(gallery.size(), [&](std::size_t i) {
    distances[i] = k.chi_square(probe.bins.data(), gallery[i].payload.bins.data(), probe.size());
  });

  std::vector<std::size_t> order(gallery.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  stable_rank(distances, order);

  RankedRetrieval out;
  out.query_id = std::move(query_id);
  out.entries.reserve(order.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    const std::size_t g = order[r];
    out.entries.push_back(RankedEntry{gallery[g].id, g, distances[g], r + 1});
  }
  return out;
}

std::string classify_1nn(const FeatureVector& probe, std::span<const LabeledFeature> gallery) {
  const auto ranked = rank_gallery(probe, gallery);
  return gallery[ranked.entries.front().gallery_index].label;
}

}  // namespace lqpat

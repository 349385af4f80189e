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

// Randomized invariants. Each case draws from a fixed seed so failures
// reproduce; the seed and trial index are printed on failure.

#include <gtest/gtest.h>

#include <numeric>
#include <vector>

#include "lqpat/descriptor.hpp"
#include "lqpat/evaluation.hpp"
#include "lqpat/random.hpp"
#include "lqpat/report.hpp"
#include "lqpat/similarity.hpp"
#include "support/test_support.hpp"

namespace {

using lqpat::DescriptorKind;
using lqpat::GrayImage;
using testing_support::Gen;

constexpr int kTrials = 60;

lqpat::Block4 random_block(Gen& gen) {
  std::uniform_int_distribution<int> px(0, 255);
  lqpat::Block4 b{};
  for (auto& v : b) v = static_cast<std::uint8_t>(px(gen));
  return b;
}

TEST(Property, MonotoneRemapLeavesCodesUnchanged) {
  Gen gen(61);
  for (int t = 0; t < kTrials; ++t) {
    std::uniform_int_distribution<std::size_t> side(4, 40);
    const auto img = testing_support::half_range_image(gen, side(gen), side(gen));
    const auto mapped = testing_support::remap(img, testing_support::random_monotone_map(gen));
    for (auto kind : {DescriptorKind::kLqpat, DescriptorKind::kLbp, DescriptorKind::kCslbp}) {
      EXPECT_EQ(lqpat::feature_images(img, {kind}), lqpat::feature_images(mapped, {kind}))
          << "trial " << t << " " << lqpat::descriptor_name(kind);
    }
  }
}

TEST(Property, NibblesDependOnlyOnTheirPixels) {
  Gen gen(62);
  for (int t = 0; t < kTrials; ++t) {
    const auto base = random_block(gen);
    const auto other = random_block(gen);
    const auto codes = lqpat::lqpat_codes(base);
    // A's high nibble reads rows 0-1 only; B's high nibble reads rows 2-3 only.
    auto top_kept = other;
    std::copy(base.begin(), base.begin() + 8, top_kept.begin());
    EXPECT_EQ(lqpat::lqpat_codes(top_kept).a >> 4, codes.a >> 4) << "trial " << t;
    auto bottom_kept = other;
    std::copy(base.begin() + 8, base.end(), bottom_kept.begin() + 8);
    EXPECT_EQ(lqpat::lqpat_codes(bottom_kept).b >> 4, codes.b >> 4) << "trial " << t;
    // A's low nibble reads columns 2-3 only; B's low nibble reads columns 0-1.
    auto right_kept = other;
    auto left_kept = other;
    for (int r = 0; r < 4; ++r) {
      for (int c = 0; c < 4; ++c) {
        (c >= 2 ? right_kept : left_kept)[r * 4 + c] = base[r * 4 + c];
      }
    }
    EXPECT_EQ(lqpat::lqpat_codes(right_kept).a & 15, codes.a & 15) << "trial " << t;
    EXPECT_EQ(lqpat::lqpat_codes(left_kept).b & 15, codes.b & 15) << "trial " << t;
  }
}

TEST(Property, NegationComplementsCodesWithoutTies) {
  Gen gen(63);
  for (int t = 0; t < kTrials; ++t) {
    // distinct values in a block, so no comparison ties
    std::vector<std::uint8_t> v(256);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), gen);
    lqpat::Block4 b{};
    lqpat::Block4 neg{};
    for (int k = 0; k < 16; ++k) {
      b[k] = v[k];
      neg[k] = static_cast<std::uint8_t>(255 - v[k]);
    }
    const auto c = lqpat::lqpat_codes(b);
    const auto n = lqpat::lqpat_codes(neg);
    EXPECT_EQ(n.a, static_cast<std::uint8_t>(~c.a)) << "trial " << t;
    EXPECT_EQ(n.b, static_cast<std::uint8_t>(~c.b)) << "trial " << t;
  }
}

TEST(Property, HistogramMassIsConserved) {
  Gen gen(64);
  for (int t = 0; t < kTrials; ++t) {
    std::uniform_int_distribution<std::size_t> side(4, 50);
    const std::size_t w = side(gen);
    const std::size_t h = side(gen);
    const auto img = testing_support::random_image(gen, w, h);
    for (auto kind : {DescriptorKind::kLqpat, DescriptorKind::kLbp, DescriptorKind::kCslbp}) {
      const std::size_t ext = lqpat::window_extent(kind);
      const double planes = kind == DescriptorKind::kLqpat ? 2.0 : 1.0;
      const double sites = static_cast<double>((w - ext + 1) * (h - ext + 1));
      const auto raw = lqpat::extract(img, {kind, 0, false});
      EXPECT_EQ(raw.size(), lqpat::bin_count(kind));
      EXPECT_EQ(std::accumulate(raw.bins.begin(), raw.bins.end(), 0.0), planes * sites);
      const auto norm = lqpat::extract(img, {kind});
      EXPECT_NEAR(std::accumulate(norm.bins.begin(), norm.bins.end(), 0.0), 1.0, 1e-12);
    }
  }
}

TEST(Property, ChiSquareAxioms) {
  Gen gen(65);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.01, 100.0);
  for (int t = 0; t < kTrials; ++t) {
    std::vector<double> x(40), y(40);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = i % 3 == 0 ? 0.0 : val(gen);
      y[i] = i % 4 == 0 ? 0.0 : val(gen);
    }
    const double d = lqpat::chi_square(std::span<const double>(x), y);
    EXPECT_GE(d, 0.0);
    EXPECT_EQ(d, lqpat::chi_square(std::span<const double>(y), x));
    EXPECT_EQ(lqpat::chi_square(std::span<const double>(x), x), 0.0);
    const double c = scale(gen);
    std::vector<double> cx(x), cy(y);
    for (auto& v : cx) v *= c;
    for (auto& v : cy) v *= c;
    EXPECT_NEAR(lqpat::chi_square(std::span<const double>(cx), cy), c * d, 1e-9 * c * d + 1e-12);
    // bounded by 1 for probability vectors
    const double sx = std::accumulate(x.begin(), x.end(), 0.0);
    const double sy = std::accumulate(y.begin(), y.end(), 0.0);
    for (auto& v : x) v /= sx;
    for (auto& v : y) v /= sy;
    EXPECT_LE(lqpat::chi_square(std::span<const double>(x), y), 1.0 + 1e-12);
  }
}

TEST(Property, ShuffleIsAPermutationAndReproducible) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<int> a(57), b(57);
    std::iota(a.begin(), a.end(), 0);
    b = a;
    lqpat::PortableRng r1(seed), r2(seed);
    r1.shuffle(a);
    r2.shuffle(b);
    EXPECT_EQ(a, b);
    auto sorted = a;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < 57; ++i) EXPECT_EQ(sorted[i], i);
    for (std::uint64_t n : {1u, 2u, 3u, 1000u}) {
      EXPECT_LT(r1.uniform_below(n), n);
    }
  }
}

TEST(Property, ResultsIndependentOfThreadCount) {
  Gen gen(66);
  lqpat::FeatureDataset ds;
  for (int c = 0; c < 5; ++c) {
    for (int i = 0; i < 5; ++i) {
      const auto img = testing_support::random_image(gen, 12 + c, 12);
      ds.add({std::to_string(c) + "/" + std::to_string(i), std::to_string(c),
              lqpat::extract(img, {})});
    }
  }
  std::vector<std::string> outputs;
  for (const char* threads : {"1", "2", "4", "7"}) {
    testing_support::ScopedEnv env("LQPAT_THREADS", std::string(threads));
    const auto rep = lqpat::evaluate(ds, {24, 24, lqpat::Averaging::kMacro});
    const auto cv = lqpat::cross_validate(ds, {0.4, 5, 17});
    outputs.push_back(
        lqpat::report::query_rows_csv(rep) + lqpat::report::curve_csv("n", "arp", rep.arp.points) +
        lqpat::report::curve_csv("rank", "cmc", rep.cmc.points) +
        lqpat::report::cross_validation_csv({cv}) + lqpat::report::format_decimal(rep.anmrr));
  }
  for (std::size_t i = 1; i < outputs.size(); ++i) EXPECT_EQ(outputs[i], outputs[0]);
}

}  // namespace

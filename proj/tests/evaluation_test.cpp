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

#include "lqpat/evaluation.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "lqpat/error.hpp"
#include "lqpat/similarity.hpp"
#include "oracle/naive_lqpat.hpp"
#include "support/test_support.hpp"

namespace {

using lqpat::FeatureDataset;
using testing_support::feature;

// a1=(4,0) a2=(3,1) b1=(0,4) b2=(2,2)
FeatureDataset four_image_fixture() {
  FeatureDataset ds;
  ds.add(feature("a1", "A", {4, 0}));
  ds.add(feature("a2", "A", {3, 1}));
  ds.add(feature("b1", "B", {0, 4}));
  ds.add(feature("b2", "B", {2, 2}));
  return ds;
}

// Leave-one-out metrics recomputed from scratch.
struct Expected {
  std::vector<std::vector<double>> precision, recall;  // [query][n-1]
  std::vector<double> nmrr;
  std::vector<std::size_t> first_rank;
  std::vector<bool> scored;
};

Expected brute_force(const FeatureDataset& ds, std::size_t n_max) {
  const std::size_t n = ds.size();
  std::map<std::string, std::size_t> class_size;
  for (const auto& r : ds.records()) ++class_size[r.label];
  std::size_t gtm = 0;
  for (const auto& [l, s] : class_size) gtm = std::max(gtm, s - 1);

  Expected e;
  for (std::size_t q = 0; q < n; ++q) {
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != q) dist.push_back({oracle::chi_square(ds[q].payload.bins, ds[j].payload.bins), j});
    }
    // ties by dataset order
    std::stable_sort(dist.begin(), dist.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<std::size_t> ranks;
    for (std::size_t r = 0; r < dist.size(); ++r) {
      if (ds[dist[r].second].label == ds[q].label) ranks.push_back(r + 1);
    }
    const std::size_t ng = ranks.size();
    e.scored.push_back(ng > 0);
    e.first_rank.push_back(ng > 0 ? ranks[0] : 0);
    std::vector<double> p, rc;
    for (std::size_t cut = 1; cut <= n_max && ng > 0; ++cut) {
      const auto hits = static_cast<double>(
          std::count_if(ranks.begin(), ranks.end(), [cut](std::size_t r) { return r <= cut; }));
      p.push_back(hits / static_cast<double>(cut));
      rc.push_back(hits / static_cast<double>(ng));
    }
    e.precision.push_back(p);
    e.recall.push_back(rc);
    if (ng == 0) {
      e.nmrr.push_back(0.0);
      continue;
    }
    const double k = static_cast<double>(std::min(4 * ng, 2 * gtm));
    double avr = 0.0;
    for (auto r : ranks) avr += static_cast<double>(r) > k ? 1.25 * k : static_cast<double>(r);
    avr /= static_cast<double>(ng);
    const double g = static_cast<double>(ng);
    e.nmrr.push_back((avr - 0.5 - g / 2.0) / (1.25 * k - 0.5 - g / 2.0));
  }
  return e;
}

FeatureDataset random_dataset(testing_support::Gen& gen, std::size_t classes, std::size_t max_per,
                              std::size_t min_per = 1) {
  std::uniform_int_distribution<std::size_t> per(min_per, max_per);
  std::uniform_real_distribution<double> val(0.0, 1.0);
  FeatureDataset ds;
  std::vector<lqpat::LabeledFeature> all;
  for (std::size_t c = 0; c < classes; ++c) {
    const std::size_t count = c == 0 ? std::max<std::size_t>(2, min_per) : per(gen);
    for (std::size_t i = 0; i < count; ++i) {
      std::vector<double> bins(6);
      for (std::size_t b = 0; b < bins.size(); ++b) bins[b] = (b == c % 6 ? 1.0 : 0.0) + val(gen);
      all.push_back(feature("c" + std::to_string(c) + "_" + std::to_string(i),
                            "class" + std::to_string(c), bins));
    }
  }
  std::shuffle(all.begin(), all.end(), gen);
  for (auto& r : all) ds.add(std::move(r));
  return ds;
}

TEST(Nmrr, GoldenValues) {
  const std::size_t ranks13[] = {1, 3};
  EXPECT_NEAR(lqpat::nmrr(ranks13, 2, 2), 0.5 / 3.5, 1e-12);
  const std::size_t perfect[] = {1, 2};
  EXPECT_NEAR(lqpat::nmrr(perfect, 2, 2), 0.0, 1e-12);
  // K = 4: rank 5 counts as 1.25K = 5
  const std::size_t late[] = {1, 5};
  EXPECT_NEAR(lqpat::nmrr(late, 2, 2), 1.5 / 3.5, 1e-12);
  const std::size_t lost[] = {9, 12};
  EXPECT_NEAR(lqpat::nmrr(lost, 2, 2), 1.0, 1e-12);
  // NG=1, GTM=3: K=min(4,6)=4
  const std::size_t one[] = {2};
  EXPECT_NEAR(lqpat::nmrr(one, 1, 3), 1.0 / 4.0, 1e-12);
}

TEST(Nmrr, Errors) {
  const std::size_t ranks[] = {1, 2};
  EXPECT_THROW(lqpat::nmrr(ranks, 0, 2), lqpat::ArgumentError);
  EXPECT_THROW(lqpat::nmrr(ranks, 3, 3), lqpat::ArgumentError);
  EXPECT_THROW(lqpat::nmrr(ranks, 2, 1), lqpat::ArgumentError);
}

TEST(PrecisionRecall, CountsRelevantPrefix) {
  const std::vector<lqpat::LabeledFeature> gallery = {
      feature("g1", "a", {0, 2, 1}), feature("g2", "b", {2, 1, 1}), feature("g3", "a", {2, 2, 1})};
  const auto ranked = lqpat::rank_gallery({{2, 0, 1}, false}, gallery, "q");
  const std::map<std::string, std::string> labels = {
      {"q", "a"}, {"g1", "a"}, {"g2", "b"}, {"g3", "a"}};
  // order g2 g3 g1
  auto pr = lqpat::precision_recall_at(ranked, labels, "a", 1);
  EXPECT_EQ(pr.precision, 0.0);
  pr = lqpat::precision_recall_at(ranked, labels, "a", 2);
  EXPECT_EQ(pr.precision, 0.5);
  EXPECT_EQ(pr.recall, 0.5);
  pr = lqpat::precision_recall_at(ranked, labels, "a", 3);
  EXPECT_NEAR(pr.precision, 2.0 / 3.0, 1e-15);
  EXPECT_EQ(pr.recall, 1.0);
  EXPECT_THROW(lqpat::precision_recall_at(ranked, labels, "a", 4), lqpat::ArgumentError);
  EXPECT_THROW(lqpat::precision_recall_at(ranked, labels, "b", 1), lqpat::ArgumentError);
}

TEST(Evaluate, FourImageFixture) {
  const auto report = lqpat::evaluate(four_image_fixture(), {3, 3, lqpat::Averaging::kMacro});
  EXPECT_EQ(report.recognition_rate, 50.0);
  ASSERT_EQ(report.cmc.points.size(), 3u);
  EXPECT_EQ(report.cmc.points[0].value, 0.5);
  EXPECT_EQ(report.cmc.points[1].value, 0.75);
  EXPECT_EQ(report.cmc.points[2].value, 1.0);
  EXPECT_EQ(report.rows[1].first_relevant_rank, 2u);
  // b2: a1 and b1 tie at 4/3, a1 comes first in dataset order
  EXPECT_EQ(report.rows[3].first_relevant_rank, 3u);
  EXPECT_TRUE(lqpat::validate(report).empty());
}

TEST(Evaluate, IdenticalPairsArePerfect) {
  lqpat::FeatureDataset ds;
  ds.add(testing_support::feature("a1", "a", {1, 0}));
  ds.add(testing_support::feature("b1", "b", {0, 1}));
  ds.add(testing_support::feature("a2", "a", {1, 0}));
  ds.add(testing_support::feature("b2", "b", {0, 1}));
  const auto report = lqpat::evaluate(ds, {1, 1, lqpat::Averaging::kMacro});
  EXPECT_EQ(report.arp.points[0].value, 1.0);
  EXPECT_EQ(report.arr.points[0].value, 1.0);
  EXPECT_EQ(report.anmrr, 0.0);
  EXPECT_EQ(report.recognition_rate, 100.0);
}

TEST(Evaluate, MatchesBruteForce) {
  testing_support::Gen gen(41);
  for (int trial = 0; trial < 8; ++trial) {
    const auto ds = random_dataset(gen, 4 + trial % 3, 5);
    const std::size_t n_max = ds.size() - 1;
    const auto want = brute_force(ds, n_max);
    for (auto avg : {lqpat::Averaging::kMacro, lqpat::Averaging::kMicro}) {
      const auto rep = lqpat::evaluate(ds, {n_max, n_max, avg});
      ASSERT_EQ(rep.rows.size(), ds.size());
      double nmrr_sum = 0.0;
      std::size_t scored = 0, hits = 0;
      for (std::size_t q = 0; q < ds.size(); ++q) {
        EXPECT_EQ(rep.rows[q].first_relevant_rank, want.first_rank[q]);
        if (!want.scored[q]) continue;
        EXPECT_NEAR(rep.rows[q].nmrr, want.nmrr[q], 1e-12);
        for (std::size_t c = 0; c < n_max; ++c) {
          EXPECT_NEAR(rep.rows[q].precision[c], want.precision[q][c], 1e-12);
          EXPECT_NEAR(rep.rows[q].recall[c], want.recall[q][c], 1e-12);
        }
        nmrr_sum += want.nmrr[q];
        ++scored;
        hits += want.first_rank[q] == 1 ? 1 : 0;
      }
      EXPECT_NEAR(rep.anmrr, nmrr_sum / static_cast<double>(scored), 1e-12);
      EXPECT_NEAR(rep.recognition_rate, 100.0 * static_cast<double>(hits) / ds.size(), 1e-12);

      // curve from per-query rows
      for (std::size_t c = 0; c < n_max; ++c) {
        double p = 0.0, r = 0.0;
        if (avg == lqpat::Averaging::kMicro) {
          for (std::size_t q = 0; q < ds.size(); ++q) {
            if (!want.scored[q]) continue;
            p += want.precision[q][c];
            r += want.recall[q][c];
          }
          p /= static_cast<double>(scored);
          r /= static_cast<double>(scored);
        } else {
          std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> per;
          for (std::size_t q = 0; q < ds.size(); ++q) {
            if (!want.scored[q]) continue;
            per[ds[q].label].first.push_back(want.precision[q][c]);
            per[ds[q].label].second.push_back(want.recall[q][c]);
          }
          for (const auto& [l, v] : per) {
            p += std::accumulate(v.first.begin(), v.first.end(), 0.0) / v.first.size();
            r += std::accumulate(v.second.begin(), v.second.end(), 0.0) / v.second.size();
          }
          p /= static_cast<double>(per.size());
          r /= static_cast<double>(per.size());
        }
        EXPECT_NEAR(rep.arp.points[c].value, p, 1e-12);
        EXPECT_NEAR(rep.arr.points[c].value, r, 1e-12);
      }
      EXPECT_LT(lqpat::aggregate_row_discrepancy(rep), 1e-12);
      EXPECT_TRUE(lqpat::validate(rep).empty());
    }
  }
}

TEST(Evaluate, RecallReachesOneAtFullDepth) {
  testing_support::Gen gen(42);
  const auto ds = random_dataset(gen, 5, 4);
  const auto rep = lqpat::evaluate(ds, {ds.size() - 1, 0, lqpat::Averaging::kMacro});
  EXPECT_NEAR(rep.arr.points.back().value, 1.0, 1e-12);
}

TEST(Evaluate, SingletonClassesWarnAndCountAsMisses) {
  auto ds = four_image_fixture();
  ds.add(feature("c1", "C", {1, 1}));
  lqpat::ScopedWarningCapture warnings;
  const auto rep = lqpat::evaluate(ds, {2, 2, lqpat::Averaging::kMacro});
  ASSERT_EQ(warnings.messages().size(), 1u);
  EXPECT_FALSE(rep.rows[4].retrieval_scored());
  EXPECT_FALSE(rep.rows[4].rank1_match);
  EXPECT_EQ(rep.recognition_rate, 100.0 * 2 / 5);
}

TEST(Evaluate, Errors) {
  EXPECT_THROW(lqpat::evaluate(four_image_fixture(), {4, 0, lqpat::Averaging::kMacro}),
               lqpat::ArgumentError);
  EXPECT_THROW(lqpat::evaluate(four_image_fixture(), {0, 4, lqpat::Averaging::kMacro}),
               lqpat::ArgumentError);
  FeatureDataset singles;
  singles.add(feature("x", "X", {1, 0}));
  singles.add(feature("y", "Y", {0, 1}));
  EXPECT_THROW(lqpat::anmrr(singles), lqpat::ArgumentError);
  EXPECT_THROW(lqpat::arp_arr(singles, 1), lqpat::ArgumentError);
  FeatureDataset mixed;
  mixed.add(feature("x", "X", {1, 0}));
  mixed.add(feature("y", "X", {0, 1, 2}));
  EXPECT_THROW(lqpat::evaluate(mixed, {}), lqpat::DimensionError);
}

TEST(Validate, FlagsBrokenReports) {
  auto rep = lqpat::evaluate(four_image_fixture(), {3, 3, lqpat::Averaging::kMacro});
  auto broken = rep;
  broken.arr.points[2].value = broken.arr.points[1].value - 0.1;
  EXPECT_FALSE(lqpat::validate(broken).empty());
  broken = rep;
  broken.cmc.points[0].value = 0.25;
  EXPECT_FALSE(lqpat::validate(broken).empty());
  broken = rep;
  broken.anmrr = 1.5;
  EXPECT_FALSE(lqpat::validate(broken).empty());
}

// fold rate for each valid probe pair of the four-image fixture
double fixture_rate(const std::vector<std::size_t>& probes) {
  const std::map<std::vector<std::size_t>, double> table = {
      {{0, 2}, 100.0}, {{0, 3}, 50.0}, {{1, 2}, 50.0}, {{1, 3}, 50.0}};
  return table.at(probes);
}

TEST(CrossValidation, FourImageFixture) {
  const auto ds = four_image_fixture();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto res = lqpat::cross_validate(ds, {0.5, 6, seed});
    ASSERT_EQ(res.folds.size(), 6u);
    double sum = 0.0;
    for (const auto& fold : res.folds) {
      ASSERT_EQ(fold.probes.size(), 2u);
      EXPECT_EQ(fold.rate, fixture_rate(fold.probes));
      sum += fold.rate;
    }
    EXPECT_NEAR(res.mean_rate, sum / 6.0, 1e-12);
  }
}

TEST(CrossValidation, SeededDeterminism) {
  testing_support::Gen gen(43);
  const auto ds = random_dataset(gen, 6, 6);
  const auto a = lqpat::cross_validate(ds, {0.3, 10, 99});
  const auto b = lqpat::cross_validate(ds, {0.3, 10, 99});
  ASSERT_EQ(a.folds.size(), b.folds.size());
  for (std::size_t f = 0; f < a.folds.size(); ++f) {
    EXPECT_EQ(a.folds[f].probes, b.folds[f].probes);
    EXPECT_EQ(a.folds[f].rate, b.folds[f].rate);
  }
  EXPECT_EQ(a.mean_rate, b.mean_rate);
  const auto c = lqpat::cross_validate(ds, {0.3, 10, 100});
  bool differs = false;
  for (std::size_t f = 0; f < a.folds.size(); ++f)
    differs |= a.folds[f].probes != c.folds[f].probes;
  EXPECT_TRUE(differs);
}

TEST(CrossValidation, ProbeCountAndCoverage) {
  testing_support::Gen gen(44);
  const auto ds = random_dataset(gen, 5, 6, 3);
  const auto classes = ds.class_index();
  for (double f : lqpat::kStandardProbeFractions) {
    const auto res = lqpat::cross_validate(ds, {f, 10, 5});
    const auto want = static_cast<std::size_t>(std::llround(f * static_cast<double>(ds.size())));
    for (const auto& fold : res.folds) {
      EXPECT_EQ(fold.probes.size(), std::clamp<std::size_t>(want, 1, ds.size() - 1));
      EXPECT_TRUE(std::is_sorted(fold.probes.begin(), fold.probes.end()));
      const std::set<std::size_t> probes(fold.probes.begin(), fold.probes.end());
      for (auto p : fold.probes) {
        const auto& members = classes.at(ds[p].label);
        EXPECT_TRUE(std::any_of(members.begin(), members.end(),
                                [&](std::size_t m) { return !probes.count(m); }));
      }
      EXPECT_LT(fold.attempts, 100u);
      EXPECT_GE(fold.rate, 0.0);
      EXPECT_LE(fold.rate, 100.0);
    }
  }
}

TEST(CrossValidation, GivesUpAfterBoundedRedraws) {
  FeatureDataset singles;
  singles.add(feature("x", "X", {1, 0}));
  singles.add(feature("y", "Y", {0, 1}));
  singles.add(feature("z", "Z", {1, 1}));
  lqpat::ScopedWarningCapture warnings;
  const auto res = lqpat::cross_validate(singles, {0.2, 2, 1});
  EXPECT_EQ(warnings.messages().size(), 2u);
  EXPECT_EQ(res.folds[0].attempts, 100u);
  EXPECT_EQ(res.mean_rate, 0.0);
}

TEST(CrossValidation, Errors) {
  const auto ds = four_image_fixture();
  EXPECT_THROW(lqpat::cross_validate(ds, {0.0, 1, 0}), lqpat::ArgumentError);
  EXPECT_THROW(lqpat::cross_validate(ds, {1.0, 1, 0}), lqpat::ArgumentError);
  EXPECT_THROW(lqpat::cross_validate(ds, {0.5, 0, 0}), lqpat::ArgumentError);
}

TEST(Entropy, KnownDistributions) {
  EXPECT_EQ(lqpat::code_entropy(std::vector<std::uint8_t>(50, 7)), 0.0);
  std::vector<std::uint8_t> all(256);
  std::iota(all.begin(), all.end(), 0);
  EXPECT_NEAR(lqpat::code_entropy(all), 8.0, 1e-9);
  EXPECT_NEAR(lqpat::code_entropy(std::vector<std::uint8_t>{1, 2, 1, 2}), 1.0, 1e-12);
  EXPECT_THROW(lqpat::code_entropy(std::vector<std::uint8_t>{}), lqpat::ArgumentError);
  lqpat::FeatureImageSet set;
  set.images.push_back({2, 1, {0, 0}});
  set.images.push_back({2, 1, {0, 1}});
  EXPECT_NEAR(lqpat::feature_entropy(set), 0.5, 1e-12);
}

}  // namespace

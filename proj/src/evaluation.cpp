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

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <string>

#include "kernels/kernels.hpp"
#include "lqpat/error.hpp"
#include "lqpat/parallel.hpp"
#include "lqpat/random.hpp"

namespace lqpat {
namespace {

// Both the recognition rate and the CMC use this so that CMC(1) equals
// rate / 100 bit for bit.
double percentage(std::size_t count, std::size_t total) {
  return static_cast<double>(count) * 100.0 / static_cast<double>(total);
}

struct ClassMap {
  std::vector<std::size_t> class_of;  // record -> class id (label order)
  std::vector<std::size_t> class_size;
  std::vector<std::string> labels;
};

ClassMap build_class_map(const FeatureDataset& ds) {
  ClassMap map;
  map.class_of.resize(ds.size());
  std::size_t cid = 0;
  for (const auto& [label, members] : ds.class_index()) {
    map.labels.push_back(label);
    map.class_size.push_back(members.size());
    for (auto i : members) map.class_of[i] = cid;
    ++cid;
  }
  return map;
}

void require_uniform_bins(const FeatureDataset& ds) {
  if (ds.empty()) return;
  const std::size_t bins = ds[0].payload.size();
  for (const auto& r : ds.records()) {
    if (r.payload.size() != bins) {
      throw DimensionError("record '" + r.id + "' has " + std::to_string(r.payload.size()) +
                           " bins, expected " + std::to_string(bins));
    }
  }
}

// 1-based ranks of the query's same-class images when every other record is
// the gallery, ordered by ascending distance with ties in dataset order.
std::vector<std::size_t> relevant_ranks(const FeatureDataset& ds, const ClassMap& classes,
                                        const kernels::KernelTable& k, std::size_t q,
                                        std::vector<double>& distances,
                                        std::vector<std::size_t>& order) {
  const auto& probe = ds[q].payload.bins;
  order.clear();
  for (std::size_t j = 0; j < ds.size(); ++j) {
    if (j == q) continue;
    distances[j] = k.chi_square(probe.data(), ds[j].payload.bins.data(), probe.size());
    order.push_back(j);
  }
  stable_rank(distances, order);
  std::vector<std::size_t> ranks;
  ranks.reserve(classes.class_size[classes.class_of[q]] - 1);
  for (std::size_t r = 0; r < order.size(); ++r) {
    if (classes.class_of[order[r]] == classes.class_of[q]) ranks.push_back(r + 1);
  }
  return ranks;
}

void check_rank_limit(std::size_t value, std::size_t n, const char* what) {
  if (value > n - 1) {
    throw ArgumentError(std::string(what) + " " + std::to_string(value) +
                        " exceeds the gallery size N-1=" + std::to_string(n - 1));
  }
}

}  // namespace

PrecisionRecall precision_recall_at(const RankedRetrieval& ranked,
                                    const std::map<std::string, std::string>& labels,
                                    const std::string& query_class, std::size_t n) {
  if (n < 1 || n > ranked.entries.size()) {
    throw ArgumentError("cutoff n=" + std::to_string(n) + " outside [1, " +
                        std::to_string(ranked.entries.size()) + "]");
  }
  std::size_t class_size = 0;
  for (const auto& [id, label] : labels) class_size += label == query_class ? 1 : 0;
  if (class_size < 2) {
    throw ArgumentError("class '" + query_class + "' has no images besides the query");
  }
  std::size_t relevant = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto& entry = ranked.entries[r];
    if (!ranked.query_id.empty() && entry.id == ranked.query_id) {
      throw ArgumentError("ranking contains the query '" + entry.id + "'");
    }
    const auto it = labels.find(entry.id);
    if (it == labels.end()) throw ArgumentError("no label for gallery id '" + entry.id + "'");
    relevant += it->second == query_class ? 1 : 0;
  }
  return {static_cast<double>(relevant) / static_cast<double>(n),
          static_cast<double>(relevant) / static_cast<double>(class_size - 1)};
}

double nmrr(std::span<const std::size_t> relevant_ranks, std::size_t ground_truth,
            std::size_t max_ground_truth) {
  if (ground_truth == 0) throw ArgumentError("nmrr: query has no ground truth");
  if (relevant_ranks.size() != ground_truth) {
    throw ArgumentError("nmrr: expected " + std::to_string(ground_truth) + " ranks, got " +
                        std::to_string(relevant_ranks.size()));
  }
  if (max_ground_truth < ground_truth) throw ArgumentError("nmrr: GTM below NG");
  const double ng = static_cast<double>(ground_truth);
  const double k = static_cast<double>(std::min(4 * ground_truth, 2 * max_ground_truth));
  double sum = 0.0;
  for (auto rank : relevant_ranks) {
    const auto r = static_cast<double>(rank);
    sum += r <= k ? r : 1.25 * k;
  }
  const double avr = sum / ng;
  const double mrr = avr - 0.5 - 0.5 * ng;
  return mrr / (1.25 * k - 0.5 - 0.5 * ng);
}

EvaluationReport evaluate(const FeatureDataset& ds, const EvaluationOptions& options) {
  const std::size_t n = ds.size();
  if (n < 2) throw ArgumentError("evaluation needs at least 2 records, got " + std::to_string(n));
  require_uniform_bins(ds);
  check_rank_limit(options.n_max, n, "retrieval cutoff");
  check_rank_limit(options.cmc_max_rank, n, "CMC max rank");

  const ClassMap classes = build_class_map(ds);
  std::size_t singletons = 0;
  std::size_t gtm = 0;
  for (auto size : classes.class_size) {
    if (size == 1) ++singletons;
    gtm = std::max(gtm, size - 1);
  }
  if (gtm == 0 && options.n_max > 0) {
    throw ArgumentError("every class has a single image; retrieval metrics are undefined");
  }
  if (singletons > 0) {
    warn(std::to_string(singletons) +
         " single-image class(es) have no ground truth and are excluded from retrieval metrics");
  }

  const auto& k = kernels::table_for(simd::active_isa());
  EvaluationReport report;
  report.averaging = options.averaging;
  report.rows.resize(n);

  parallel::for_each_index(n, [&](std::size_t q) {
    thread_local std::vector<double> distances;
    thread_local std::vector<std::size_t> order;
    distances.resize(n);
    const auto ranks = relevant_ranks(ds, classes, k, q, distances, order);

    QueryRow& row = report.rows[q];
    row.id = ds[q].id;
    row.label = ds[q].label;
    row.ground_truth = ranks.size();
    row.first_relevant_rank = ranks.empty() ? 0 : ranks.front();
    row.rank1_match = row.first_relevant_rank == 1;
    if (ranks.empty()) return;
    row.nmrr = nmrr(ranks, ranks.size(), gtm);
    row.precision.resize(options.n_max);
    row.recall.resize(options.n_max);
    std::size_t hits = 0;
    for (std::size_t cut = 1; cut <= options.n_max; ++cut) {
      while (hits < ranks.size() && ranks[hits] <= cut) ++hits;
      row.precision[cut - 1] = static_cast<double>(hits) / static_cast<double>(cut);
      row.recall[cut - 1] = static_cast<double>(hits) / static_cast<double>(ranks.size());
    }
  });

  // Reductions run in query order so results do not depend on thread count.
  std::size_t scored = 0;
  double nmrr_sum = 0.0;
  std::size_t matches = 0;
  for (const auto& row : report.rows) {
    matches += row.rank1_match ? 1 : 0;
    if (!row.retrieval_scored()) continue;
    ++scored;
    nmrr_sum += row.nmrr;
  }
  report.anmrr = scored > 0 ? nmrr_sum / static_cast<double>(scored) : 0.0;
  report.recognition_rate = percentage(matches, n);

  for (std::size_t cut = 1; cut <= options.n_max; ++cut) {
    double p_total = 0.0;
    double r_total = 0.0;
    std::size_t groups = 0;
    if (options.averaging == Averaging::kMicro) {
      for (const auto& row : report.rows) {
        if (!row.retrieval_scored()) continue;
        p_total += row.precision[cut - 1];
        r_total += row.recall[cut - 1];
        ++groups;
      }
    } else {
      for (const auto& [label, members] : ds.class_index()) {
        if (members.size() < 2) continue;
        double p = 0.0;
        double r = 0.0;
        for (auto q : members) {
          p += report.rows[q].precision[cut - 1];
          r += report.rows[q].recall[cut - 1];
        }
        p_total += p / static_cast<double>(members.size());
        r_total += r / static_cast<double>(members.size());
        ++groups;
      }
    }
    report.arp.points.push_back({cut, p_total / static_cast<double>(groups)});
    report.arr.points.push_back({cut, r_total / static_cast<double>(groups)});
  }

  for (std::size_t rank = 1; rank <= options.cmc_max_rank; ++rank) {
    std::size_t hit = 0;
    for (const auto& row : report.rows) {
      hit += row.first_relevant_rank >= 1 && row.first_relevant_rank <= rank ? 1 : 0;
    }
    report.cmc.points.push_back({rank, percentage(hit, n) / 100.0});
  }
  return report;
}

std::pair<RetrievalCurve, RetrievalCurve> arp_arr(const FeatureDataset& ds, std::size_t n_max,
                                                  Averaging averaging) {
  if (n_max == 0) throw ArgumentError("retrieval cutoff must be >= 1");
  auto report = evaluate(ds, {n_max, 0, averaging});
  return {std::move(report.arp), std::move(report.arr)};
}

double anmrr(const FeatureDataset& ds) {
  if (ds.size() >= 2) {
    const auto classes = build_class_map(ds);
    if (std::all_of(classes.class_size.begin(), classes.class_size.end(),
                    [](std::size_t s) { return s < 2; })) {
      throw ArgumentError("every class has a single image; ANMRR is undefined");
    }
  }
  return evaluate(ds, {}).anmrr;
}

double recognition_rate(const FeatureDataset& ds) { return evaluate(ds, {}).recognition_rate; }

CmcCurve cmc(const FeatureDataset& ds, std::size_t max_rank) {
  if (max_rank == 0) throw ArgumentError("CMC max rank must be >= 1");
  return evaluate(ds, {0, max_rank, Averaging::kMacro}).cmc;
}

double aggregate_row_discrepancy(const EvaluationReport& report) {
  double worst = 0.0;
  auto track = [&worst](double a, double b) { worst = std::max(worst, std::abs(a - b)); };

  std::map<std::string, std::vector<const QueryRow*>> by_class;
  std::size_t scored = 0;
  std::size_t matches = 0;
  double nmrr_sum = 0.0;
  for (const auto& row : report.rows) {
    matches += row.rank1_match ? 1 : 0;
    if (!row.retrieval_scored()) continue;
    by_class[row.label].push_back(&row);
    nmrr_sum += row.nmrr;
    ++scored;
  }
  if (scored > 0) track(report.anmrr, nmrr_sum / static_cast<double>(scored));
  if (!report.rows.empty()) {
    track(report.recognition_rate,
          100.0 * static_cast<double>(matches) / static_cast<double>(report.rows.size()));
  }

  for (std::size_t idx = 0; idx < report.arp.points.size(); ++idx) {
    double p = 0.0;
    double r = 0.0;
    if (report.averaging == Averaging::kMicro) {
      for (const auto& [label, rows] : by_class) {
        for (const auto* row : rows) {
          p += row->precision[idx];
          r += row->recall[idx];
        }
      }
      p /= static_cast<double>(scored);
      r /= static_cast<double>(scored);
    } else {
      for (const auto& [label, rows] : by_class) {
        double cp = 0.0;
        double cr = 0.0;
        for (const auto* row : rows) {
          cp += row->precision[idx];
          cr += row->recall[idx];
        }
        p += cp / static_cast<double>(rows.size());
        r += cr / static_cast<double>(rows.size());
      }
      p /= static_cast<double>(by_class.size());
      r /= static_cast<double>(by_class.size());
    }
    track(report.arp.points[idx].value, p);
    track(report.arr.points[idx].value, r);
  }

  for (const auto& point : report.cmc.points) {
    std::size_t hit = 0;
    for (const auto& row : report.rows) {
      hit += row.first_relevant_rank >= 1 && row.first_relevant_rank <= point.x ? 1 : 0;
    }
    track(point.value, static_cast<double>(hit) / static_cast<double>(report.rows.size()));
  }
  return worst;
}

std::vector<std::string> validate(const EvaluationReport& report) {
  std::vector<std::string> problems;
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  auto check_curve = [&](const std::vector<CurvePoint>& pts, const char* name, bool monotone) {
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!in_unit(pts[i].value)) {
        problems.push_back(std::string(name) + " value outside [0,1] at " +
                           std::to_string(pts[i].x));
      }
      if (monotone && i > 0 && pts[i].value < pts[i - 1].value) {
        problems.push_back(std::string(name) + " decreases at " + std::to_string(pts[i].x));
      }
    }
  };
  check_curve(report.arp.points, "ARP", false);
  check_curve(report.arr.points, "ARR", true);
  check_curve(report.cmc.points, "CMC", true);
  if (!in_unit(report.anmrr)) problems.push_back("ANMRR outside [0,1]");
  if (report.recognition_rate < 0.0 || report.recognition_rate > 100.0) {
    problems.push_back("recognition rate outside [0,100]");
  }
  if (!report.cmc.points.empty() &&
      report.cmc.points.front().value != report.recognition_rate / 100.0) {
    problems.push_back("CMC rank-1 differs from the recognition rate");
  }
  return problems;
}

CrossValResult cross_validate(const FeatureDataset& ds, const CrossValConfig& config) {
  const std::size_t n = ds.size();
  if (n < 2) throw ArgumentError("cross-validation needs at least 2 records");
  if (!(config.probe_fraction > 0.0 && config.probe_fraction < 1.0)) {
    throw ArgumentError("probe fraction must lie in (0, 1), got " +
                        std::to_string(config.probe_fraction));
  }
  if (config.folds == 0) throw ArgumentError("folds must be >= 1");
  require_uniform_bins(ds);

  constexpr std::size_t kMaxAttempts = 100;
  const auto raw =
      static_cast<std::size_t>(std::llround(config.probe_fraction * static_cast<double>(n)));
  const std::size_t probe_count = std::clamp<std::size_t>(raw, 1, n - 1);
  const ClassMap classes = build_class_map(ds);
  const auto& k = kernels::table_for(simd::active_isa());

  PortableRng rng(config.seed);
  CrossValResult result;
  result.config = config;
  std::vector<std::size_t> perm(n);
  std::vector<char> is_probe(n);

  for (std::size_t f = 0; f < config.folds; ++f) {
    CrossValFold fold;
    for (fold.attempts = 1;; ++fold.attempts) {
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      rng.shuffle(perm);
      fold.probes.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(probe_count));
      std::sort(fold.probes.begin(), fold.probes.end());

      std::vector<std::size_t> gallery_per_class(classes.class_size.size(), 0);
      std::fill(is_probe.begin(), is_probe.end(), 0);
      for (auto p : fold.probes) is_probe[p] = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if (!is_probe[i]) ++gallery_per_class[classes.class_of[i]];
      }
      const bool covered = std::all_of(fold.probes.begin(), fold.probes.end(), [&](std::size_t p) {
        return gallery_per_class[classes.class_of[p]] > 0;
      });
      if (covered) break;
      if (fold.attempts == kMaxAttempts) {
        warn("fold " + std::to_string(f + 1) + ": no split within " + std::to_string(kMaxAttempts) +
             " draws keeps every probe class in the gallery; using the last draw");
        break;
      }
    }

    std::vector<std::size_t> gallery;
    gallery.reserve(n - probe_count);
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_probe[i]) gallery.push_back(i);
    }
    std::vector<char> matched(fold.probes.size(), 0);
    parallel::for_each_index(fold.probes.size(), [&](std::size_t pi) {
      const auto& probe = ds[fold.probes[pi]].payload.bins;
      std::size_t best = gallery.front();
      double best_d = k.chi_square(probe.data(), ds[best].payload.bins.data(), probe.size());
      for (std::size_t gi = 1; gi < gallery.size(); ++gi) {
        const double d =
            k.chi_square(probe.data(), ds[gallery[gi]].payload.bins.data(), probe.size());
        if (d < best_d) {
          best_d = d;
          best = gallery[gi];
        }
      }
      matched[pi] = classes.class_of[best] == classes.class_of[fold.probes[pi]] ? 1 : 0;
    });
    fold.matches = static_cast<std::size_t>(std::count(matched.begin(), matched.end(), 1));
    fold.rate = percentage(fold.matches, fold.probes.size());
    result.folds.push_back(std::move(fold));
  }

  double total = 0.0;
  for (const auto& fold : result.folds) total += fold.rate;
  result.mean_rate = total / static_cast<double>(result.folds.size());
  return result;
}

double code_entropy(std::span<const std::uint8_t> codes) {
  if (codes.empty()) throw ArgumentError("entropy of an empty feature image");
  std::array<std::size_t, 256> counts{};
  for (auto c : codes) ++counts[c];
  const auto total = static_cast<double>(codes.size());
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h -= p * std::log2(p);
  }
  // -0.0 for single-symbol images
  return h == 0.0 ? 0.0 : h;
}

double feature_entropy(const FeatureImageSet& fis) {
  if (fis.images.empty()) throw ArgumentError("feature image set is empty");
  double sum = 0.0;
  for (const auto& img : fis.images) sum += code_entropy(img.codes);
  return sum / static_cast<double>(fis.images.size());
}

}  // namespace lqpat

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

// Retrieval and identification metrics over a labeled feature dataset.
//
// Retrieval: every image queries all others. precision@n = relevant in top n
// / n, recall@n = relevant in top n / NG where NG = class size - 1. ARP/ARR
// average per class, then over classes (macro) or directly over queries
// (micro). Queries from single-image classes have no ground truth and are
// left out of retrieval metrics with a warning.
//
// ANMRR uses the MPEG-7 rank weighting. For a query with NG relevant images,
//   K      = min(4 NG, 2 GTM)          GTM = max NG over scored queries
//   rank'  = rank if rank <= K else 1.25 K
//   AVR    = mean rank' over the NG relevant images
//   MRR    = AVR - 0.5 - NG/2
//   NMRR   = MRR / (1.25 K - 0.5 - NG/2)
// and ANMRR is the mean NMRR over scored queries; 0 is perfect, 1 is a miss.
//
// Identification: leave-one-out 1NN rate = matches / N * 100, where a match
// means the rank-1 gallery image shares the probe's class. CMC(r) is the
// fraction of probes with a same-class image at rank <= r.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lqpat/descriptor.hpp"
#include "lqpat/labeled.hpp"
#include "lqpat/similarity.hpp"

namespace lqpat {

enum class Averaging { kMacro, kMicro };

struct CurvePoint {
  std::size_t x = 0;  ///< n retrieved, or rank
  double value = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct RetrievalCurve {
  enum class Kind { kArp, kArr };
  Kind kind = Kind::kArp;
  std::vector<CurvePoint> points;
};

struct CmcCurve {
  std::vector<CurvePoint> points;
};

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

/// `labels` maps every dataset id (query included) to its class; the ranking
/// must not contain the query. Throws ArgumentError when n is outside
/// [1, gallery size] or the query class has no other member.
PrecisionRecall precision_recall_at(const RankedRetrieval& ranked,
                                    const std::map<std::string, std::string>& labels,
                                    const std::string& query_class, std::size_t n);

/// NMRR for one query from the 1-based ranks of its relevant images.
double nmrr(std::span<const std::size_t> relevant_ranks, std::size_t ground_truth,
            std::size_t max_ground_truth);

struct QueryRow {
  std::string id;
  std::string label;
  std::size_t ground_truth = 0;   ///< NG; 0 means excluded from retrieval
  std::vector<double> precision;  ///< [n-1] for n = 1..n_max
  std::vector<double> recall;
  double nmrr = 0.0;
  std::size_t first_relevant_rank = 0;  ///< 0 when the class has no other image
  bool rank1_match = false;

  bool retrieval_scored() const { return ground_truth > 0; }
};

struct Provenance {
  std::string descriptor;
  std::string dataset_digest;
  std::optional<std::uint64_t> seed;
};

struct EvaluationOptions {
  std::size_t n_max = 0;         ///< 0 skips the ARP/ARR curves
  std::size_t cmc_max_rank = 0;  ///< 0 skips the CMC
  Averaging averaging = Averaging::kMacro;
};

struct EvaluationReport {
  std::vector<QueryRow> rows;
  Averaging averaging = Averaging::kMacro;
  RetrievalCurve arp{RetrievalCurve::Kind::kArp, {}};
  RetrievalCurve arr{RetrievalCurve::Kind::kArr, {}};
  double anmrr = 0.0;
  double recognition_rate = 0.0;  ///< percent
  CmcCurve cmc;
  Provenance provenance;
};

/// One ranking pass per query feeding every metric. Throws ArgumentError for
/// datasets with fewer than 2 records, n_max > N-1, cmc_max_rank > N-1, or
/// when retrieval curves are requested but every class is a singleton.
EvaluationReport evaluate(const FeatureDataset& ds, const EvaluationOptions& options);

std::pair<RetrievalCurve, RetrievalCurve> arp_arr(const FeatureDataset& ds, std::size_t n_max,
                                                  Averaging averaging = Averaging::kMacro);
double anmrr(const FeatureDataset& ds);
/// Leave-one-out 1NN rate in percent.
double recognition_rate(const FeatureDataset& ds);
CmcCurve cmc(const FeatureDataset& ds, std::size_t max_rank);

/// Largest absolute difference between the report's aggregates and the same
/// quantities recomputed from its per-query rows.
double aggregate_row_discrepancy(const EvaluationReport& report);

/// Returns human-readable violations of the curve/range invariants (ARR and
/// CMC non-decreasing, values in [0,1], ANMRR in [0,1], rate in [0,100]).
std::vector<std::string> validate(const EvaluationReport& report);

// ---------------------------------------------------------------------------
// Cross-validation

/// Probe fractions used when --cv is given without --probe-fraction.
inline constexpr double kStandardProbeFractions[] = {0.2, 0.3, 0.4, 0.5, 0.6};

struct CrossValConfig {
  double probe_fraction = 0.2;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
};

struct CrossValFold {
  std::vector<std::size_t> probes;  ///< dataset indices, ascending
  std::size_t matches = 0;
  double rate = 0.0;         ///< percent
  std::size_t attempts = 1;  ///< draws until the split was accepted
};

struct CrossValResult {
  CrossValConfig config;
  std::vector<CrossValFold> folds;
  double mean_rate = 0.0;
};

/// Per fold: draw round(fraction * N) probes uniformly without replacement
/// (clamped to [1, N-1]); the rest, in dataset order, form the gallery. A
/// draw is redrawn when some probe's class has no gallery image; after 100
/// draws the last one is kept and a warning is emitted. Result is the mean
/// of the fold 1NN rates.
CrossValResult cross_validate(const FeatureDataset& ds, const CrossValConfig& config);

// ---------------------------------------------------------------------------
// Entropy diagnostic

/// Shannon entropy in bits of the empirical code distribution.
double code_entropy(std::span<const std::uint8_t> codes);

/// Mean entropy over the set's feature images.
double feature_entropy(const FeatureImageSet& fis);

}  // namespace lqpat

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

// lqpat: feature extraction and retrieval/recognition evaluation runs.
//
// Exit status: 0 success, 1 runtime error, 2 usage error, 3 a result failed
// validation (nothing is written in that case).

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lqpat/dataset.hpp"
#include "lqpat/descriptor.hpp"
#include "lqpat/error.hpp"
#include "lqpat/evaluation.hpp"
#include "lqpat/parallel.hpp"
#include "lqpat/report.hpp"
#include "lqpat/simd.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int { kOk = 0, kRuntimeError = 1, kUsageError = 2, kValidationFailed = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Manifest {
 public:
  Manifest(std::string command, const std::vector<std::string>& argv) {
    doc_["tool"] = "lqpat";
    doc_["version"] = kToolVersion;
    doc_["command"] = std::move(command);
    doc_["argv"] = argv;
    doc_["simd"] = std::string(lqpat::simd::isa_name(lqpat::simd::active_isa()));
    doc_["threads"] = lqpat::parallel::worker_count();
    doc_["seed"] = nullptr;
    doc_["started_at"] = utc_now();
    doc_["outputs"] = json::array();
  }

  void set_descriptor(const lqpat::DescriptorSpec& spec) {
    doc_["descriptor"] = {{"name", std::string(lqpat::descriptor_name(spec.kind))},
                          {"threshold", spec.threshold},
                          {"normalize", spec.normalize}};
  }
  void set_digest(const std::string& digest) { doc_["dataset_digest"] = digest; }
  void set_seed(std::uint64_t seed) { doc_["seed"] = seed; }
  void set(const std::string& key, json value) { doc_[key] = std::move(value); }

  void write_output(const fs::path& path, const std::string& content) {
    lqpat::report::write_text(path, content);
    doc_["outputs"].push_back(path.filename().string());
  }

  void finish(const fs::path& path) {
    doc_["finished_at"] = utc_now();
    lqpat::report::write_text(path, doc_.dump(2) + "\n");
  }

 private:
  json doc_;
};

fs::path with_suffix(const std::string& prefix, const std::string& suffix) {
  return fs::path(prefix + suffix);
}

lqpat::DescriptorKind descriptor_or_usage_error(const std::string& name) {
  const auto kind = lqpat::parse_descriptor(name);
  if (!kind) {
    throw UsageError("unknown descriptor '" + name + "' (valid: lqpat, lbp, cslbp)");
  }
  return *kind;
}

struct LoadedStore {
  lqpat::FeatureStore store;
  std::string digest;
};

LoadedStore load_store(const std::string& path) {
  LoadedStore out;
  out.store = lqpat::load_features(path);
  out.digest = lqpat::sha256_hex(lqpat::serialize_features(out.store));
  return out;
}

int report_violations(const std::vector<std::string>& problems) {
  for (const auto& p : problems) std::cerr << "validation failed: " << p << '\n';
  return problems.empty() ? kOk : kValidationFailed;
}

// ---------------------------------------------------------------------------

struct ExtractArgs {
  std::string dataset;
  std::string descriptor;
  int threshold = 0;
  bool no_normalize = false;
  std::string out;
};

int cmd_extract(const ExtractArgs& args, const std::vector<std::string>& argv) {
  lqpat::DescriptorSpec spec;
  spec.kind = descriptor_or_usage_error(args.descriptor);
  spec.threshold = args.threshold;
  spec.normalize = !args.no_normalize;
  if (spec.threshold < 0) throw UsageError("--threshold must be >= 0");

  Manifest manifest("extract", argv);
  manifest.set_descriptor(spec);

  const auto images = lqpat::scan(args.dataset);
  const auto extraction = lqpat::extract_all(images, spec);
  const lqpat::FeatureStore store{spec, extraction.features};
  const auto text = lqpat::serialize_features(store);

  manifest.set_digest(lqpat::sha256_hex(text));
  manifest.write_output(args.out, text);
  manifest.finish(args.out + ".manifest.json");

  const auto n = extraction.features.size();
  std::cout << "records: " << n << "\n"
            << "classes: " << extraction.features.class_count() << "\n"
            << "excluded: " << extraction.excluded.size() << "\n"
            << "mean comparisons per image: "
            << lqpat::report::format_decimal(static_cast<double>(extraction.comparisons) /
                                             static_cast<double>(n))
            << "\n";
  return kOk;
}

struct RetrieveArgs {
  std::string features;
  std::size_t top = 0;
  std::string out_prefix;
  bool micro = false;
};

int cmd_retrieve(const RetrieveArgs& args, const std::vector<std::string>& argv) {
  if (args.top < 1) throw UsageError("--top must be >= 1");
  const auto loaded = load_store(args.features);
  Manifest manifest("retrieve", argv);
  manifest.set_descriptor(loaded.store.spec);
  manifest.set_digest(loaded.digest);
  manifest.set("averaging", args.micro ? "micro" : "macro");

  lqpat::EvaluationOptions options;
  options.n_max = args.top;
  options.averaging = args.micro ? lqpat::Averaging::kMicro : lqpat::Averaging::kMacro;
  const auto report = lqpat::evaluate(loaded.store.dataset, options);
  if (const int rc = report_violations(lqpat::validate(report)); rc != kOk) return rc;

  manifest.write_output(with_suffix(args.out_prefix, ".arp.csv"),
                        lqpat::report::curve_csv("n", "arp", report.arp.points));
  manifest.write_output(with_suffix(args.out_prefix, ".arr.csv"),
                        lqpat::report::curve_csv("n", "arr", report.arr.points));
  manifest.write_output(with_suffix(args.out_prefix, ".summary.csv"),
                        lqpat::report::summary_csv({{"anmrr", report.anmrr}}));
  manifest.write_output(with_suffix(args.out_prefix, ".queries.csv"),
                        lqpat::report::query_rows_csv(report));
  manifest.finish(with_suffix(args.out_prefix, ".manifest.json"));

  std::cout << "queries: " << report.rows.size() << "\n"
            << "ARP@" << args.top << ": "
            << lqpat::report::format_decimal(report.arp.points.back().value) << "\n"
            << "ARR@" << args.top << ": "
            << lqpat::report::format_decimal(report.arr.points.back().value) << "\n"
            << "ANMRR: " << lqpat::report::format_decimal(report.anmrr) << "\n";
  return kOk;
}

struct RecognizeArgs {
  std::string features;
  std::size_t cmc = 0;
  bool cv = false;
  std::vector<double> probe_fractions;
  std::size_t folds = 10;
  std::optional<std::uint64_t> seed;
  std::string out_prefix;
};

int cmd_recognize(const RecognizeArgs& args, const std::vector<std::string>& argv) {
  if (args.cv && !args.seed) {
    throw UsageError("--cv requires an explicit --seed so folds are reproducible");
  }
  const auto loaded = load_store(args.features);
  Manifest manifest("recognize", argv);
  manifest.set_descriptor(loaded.store.spec);
  manifest.set_digest(loaded.digest);

  if (args.cv) {
    manifest.set_seed(*args.seed);
    std::vector<double> fractions = args.probe_fractions;
    if (fractions.empty()) {
      fractions.assign(std::begin(lqpat::kStandardProbeFractions),
                       std::end(lqpat::kStandardProbeFractions));
    }
    std::vector<lqpat::CrossValResult> results;
    for (double f : fractions) {
      results.push_back(lqpat::cross_validate(loaded.store.dataset, {f, args.folds, *args.seed}));
    }
    std::vector<std::string> problems;
    for (const auto& r : results) {
      if (r.mean_rate < 0.0 || r.mean_rate > 100.0) problems.push_back("mean rate outside [0,100]");
    }
    if (const int rc = report_violations(problems); rc != kOk) return rc;
    manifest.write_output(with_suffix(args.out_prefix, ".cv.csv"),
                          lqpat::report::cross_validation_csv(results));
    manifest.finish(with_suffix(args.out_prefix, ".manifest.json"));
    for (const auto& r : results) {
      std::cout << "probe fraction " << lqpat::report::format_decimal(r.config.probe_fraction)
                << ": mean recognition rate " << lqpat::report::format_decimal(r.mean_rate)
                << "% over " << r.folds.size() << " folds\n";
    }
    return kOk;
  }

  lqpat::EvaluationOptions options;
  options.cmc_max_rank = args.cmc;
  const auto report = lqpat::evaluate(loaded.store.dataset, options);
  if (const int rc = report_violations(lqpat::validate(report)); rc != kOk) return rc;
  manifest.write_output(
      with_suffix(args.out_prefix, ".summary.csv"),
      lqpat::report::summary_csv({{"recognition_rate", report.recognition_rate}}));
  if (args.cmc > 0) {
    manifest.write_output(with_suffix(args.out_prefix, ".cmc.csv"),
                          lqpat::report::curve_csv("rank", "cmc", report.cmc.points));
  }
  manifest.finish(with_suffix(args.out_prefix, ".manifest.json"));
  std::cout << "probes: " << report.rows.size() << "\n"
            << "recognition rate: " << lqpat::report::format_decimal(report.recognition_rate)
            << "%\n";
  return kOk;
}

struct EntropyArgs {
  std::string dataset;
  std::string descriptor;
  int threshold = 0;
  std::string out;
};

int cmd_entropy(const EntropyArgs& args, const std::vector<std::string>& argv) {
  lqpat::DescriptorSpec spec;
  spec.kind = descriptor_or_usage_error(args.descriptor);
  spec.threshold = args.threshold;
  if (spec.threshold < 0) throw UsageError("--threshold must be >= 0");

  Manifest manifest("entropy", argv);
  manifest.set_descriptor(spec);
  const auto images = lqpat::scan(args.dataset);

  std::string rows = "id,label,entropy\n";
  double total = 0.0;
  std::size_t count = 0;
  std::vector<std::string> problems;
  for (const auto& rec : images.records()) {
    if (rec.payload.width() < lqpat::min_image_side(spec.kind) ||
        rec.payload.height() < lqpat::min_image_side(spec.kind)) {
      lqpat::warn(rec.id + ": below the descriptor minimum size; excluded");
      continue;
    }
    const double h = lqpat::feature_entropy(lqpat::feature_images(rec.payload, spec));
    if (!(h >= 0.0 && h <= 8.0)) problems.push_back(rec.id + ": entropy outside [0,8]");
    rows += rec.id + "," + rec.label + "," + lqpat::report::format_decimal(h) + "\n";
    total += h;
    ++count;
  }
  if (count == 0) throw lqpat::ArgumentError("no image meets the descriptor minimum size");
  if (const int rc = report_violations(problems); rc != kOk) return rc;
  const double mean = total / static_cast<double>(count);

  fs::path summary = args.out;
  summary.replace_extension(".summary.csv");
  manifest.set_digest(lqpat::sha256_hex(rows));
  manifest.write_output(args.out, rows);
  manifest.write_output(summary, lqpat::report::summary_csv({{"entropy", mean}}));
  manifest.finish(args.out + ".manifest.json");
  std::cout << "images: " << count << "\n"
            << "mean entropy: " << lqpat::report::format_decimal(mean) << " bits\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> raw_args(argv, argv + argc);
  CLI::App app{"LQPAT descriptor extraction and evaluation"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  ExtractArgs ex;
  auto* extract =
      app.add_subcommand("extract", "Extract feature vectors from a labeled image tree");
  extract->add_option("--dataset", ex.dataset, "Dataset root (<root>/<class>/<images>)")
      ->required();
  extract->add_option("--descriptor", ex.descriptor, "lqpat, lbp or cslbp")->required();
  extract->add_option("--threshold", ex.threshold, "LBP/CSLBP neighbor threshold")
      ->capture_default_str();
  extract->add_flag("--no-normalize", ex.no_normalize, "Keep raw histogram counts");
  extract->add_option("--out", ex.out, "Feature CSV to write")->required();

  RetrieveArgs rt;
  auto* retrieve = app.add_subcommand("retrieve", "ARP/ARR curves and ANMRR, every image as query");
  retrieve->add_option("--features", rt.features, "Feature CSV")->required();
  retrieve->add_option("--top", rt.top, "Largest number of retrieved images")->required();
  retrieve->add_option("--out-prefix", rt.out_prefix, "Output prefix P (P.arp.csv, ...)")
      ->required();
  retrieve->add_flag("--micro", rt.micro, "Average over queries instead of per class");

  RecognizeArgs rc;
  std::uint64_t seed = 0;
  auto* recognize =
      app.add_subcommand("recognize", "Leave-one-out 1NN rate, CMC, cross-validation");
  recognize->add_option("--features", rc.features, "Feature CSV")->required();
  recognize->add_option("--cmc", rc.cmc, "Write the CMC up to this rank");
  recognize->add_flag("--cv", rc.cv, "Random probe/gallery cross-validation");
  recognize->add_option("--probe-fraction", rc.probe_fractions,
                        "Probe fraction(s); default 0.2 0.3 0.4 0.5 0.6");
  recognize->add_option("--folds", rc.folds, "Folds per fraction")->capture_default_str();
  auto* seed_opt = recognize->add_option("--seed", seed, "Seed for fold sampling");
  recognize->add_option("--out-prefix", rc.out_prefix, "Output prefix P")->required();

  EntropyArgs en;
  auto* entropy = app.add_subcommand("entropy", "Mean feature-image entropy per image");
  entropy->add_option("--dataset", en.dataset, "Dataset root")->required();
  entropy->add_option("--descriptor", en.descriptor, "lqpat, lbp or cslbp")->required();
  entropy->add_option("--threshold", en.threshold, "LBP/CSLBP neighbor threshold")
      ->capture_default_str();
  entropy->add_option("--out", en.out, "Per-image entropy CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*extract) return cmd_extract(ex, raw_args);
    if (*retrieve) return cmd_retrieve(rt, raw_args);
    if (*recognize) {
      if (*seed_opt) rc.seed = seed;
      return cmd_recognize(rc, raw_args);
    }
    if (*entropy) return cmd_entropy(en, raw_args);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  return kUsageError;
}

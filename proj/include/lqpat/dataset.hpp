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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "lqpat/descriptor.hpp"
#include "lqpat/error.hpp"
#include "lqpat/labeled.hpp"

namespace lqpat {

/// Name of the optional manifest listing `path,label` rows for flat trees.
inline constexpr std::string_view kLabelManifest = "labels.csv";

/// Loads `root/<class_label>/<image files>` (or the files listed in
/// root/labels.csv) in lexicographic relative-path order. Ids are relative
/// paths with '/' separators. Undecodable files are skipped with a warning.
/// Throws IoError when root is missing or no image decodes.
ImageDataset scan(const std::filesystem::path& root);

struct ExtractionResult {
  FeatureDataset features;
  std::vector<std::string> excluded;  ///< ids below the descriptor's minimum size
  std::uint64_t comparisons = 0;
};

/// Order-preserving extraction; undersized records are excluded with a
/// warning. Throws ArgumentError if every record is excluded.
ExtractionResult extract_all(const ImageDataset& ds, const DescriptorSpec& spec,
                             const ExtractOptions& options = {});

// ---------------------------------------------------------------------------
// Feature store
//
//   # lqpat-features v1 descriptor=<name> threshold=<T>
//   id,label,normalized,b0,...,b{K-1}
//   <id>,<label>,<true|false>,<bin>,...
//
// Bins use the shortest decimal form that round-trips exactly.

struct FeatureStore {
  DescriptorSpec spec;
  FeatureDataset dataset;

  friend bool operator==(const FeatureStore&, const FeatureStore&) = default;
};

class FeatureStoreError : public IoError {
 public:
  enum class Kind { kVersionMismatch, kTruncated, kInconsistentBinCount, kMalformed };

  FeatureStoreError(Kind kind, const std::string& what) : IoError(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Throws ArgumentError for an empty store or mixed bin counts.
std::string serialize_features(const FeatureStore& store);
FeatureStore parse_features(std::string_view text);

void save_features(const std::filesystem::path& path, const FeatureStore& store);
FeatureStore load_features(const std::filesystem::path& path);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace lqpat

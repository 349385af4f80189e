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
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lqpat/descriptor.hpp"
#include "lqpat/error.hpp"
#include "lqpat/image.hpp"

namespace lqpat {

template <typename Payload>
struct LabeledRecord {
  std::string id;
  std::string label;
  Payload payload;

  friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

using LabeledImage = LabeledRecord<GrayImage>;
using LabeledFeature = LabeledRecord<FeatureVector>;

/// Ordered records with unique ids and non-empty labels.
template <typename Payload>
class LabeledDataset {
 public:
  using Record = LabeledRecord<Payload>;

  LabeledDataset() = default;
  explicit LabeledDataset(std::vector<Record> records) {
    for (auto& r : records) add(std::move(r));
  }

  /// Throws ArgumentError on a duplicate id or empty label.
  void add(Record record) {
    if (record.label.empty()) throw ArgumentError("record '" + record.id + "' has an empty label");
    if (!ids_.insert(record.id).second)
      throw ArgumentError("duplicate record id '" + record.id + "'");
    records_.push_back(std::move(record));
  }

  const std::vector<Record>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const Record& operator[](std::size_t i) const { return records_[i]; }

  /// label -> record indices, in record order.
  std::map<std::string, std::vector<std::size_t>> class_index() const {
    std::map<std::string, std::vector<std::size_t>> index;
    for (std::size_t i = 0; i < records_.size(); ++i) index[records_[i].label].push_back(i);
    return index;
  }

  std::size_t class_count() const { return class_index().size(); }

  friend bool operator==(const LabeledDataset& a, const LabeledDataset& b) {
    return a.records_ == b.records_;
  }

 private:
  std::vector<Record> records_;
  std::set<std::string> ids_;
};

using ImageDataset = LabeledDataset<GrayImage>;
using FeatureDataset = LabeledDataset<FeatureVector>;

}  // namespace lqpat

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

#include "lqpat/dataset.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "lqpat/error.hpp"
#include "lqpat/report.hpp"
#include "support/test_support.hpp"

namespace {

namespace fs = std::filesystem;
using lqpat::FeatureStoreError;
using testing_support::Gen;
using testing_support::TempDir;

void put_image(const fs::path& path, Gen& gen, std::size_t w = 8, std::size_t h = 6) {
  fs::create_directories(path.parent_path());
  lqpat::write_pgm(path, testing_support::random_image(gen, w, h));
}

void put_text(const fs::path& path, const std::string& text) {
  fs::create_directories(path.parent_path());
  lqpat::report::write_text(path, text);
}

FeatureStoreError::Kind store_error_kind(const std::string& text) {
  try {
    lqpat::parse_features(text);
  } catch (const FeatureStoreError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parse succeeded";
  return FeatureStoreError::Kind::kMalformed;
}

TEST(Scan, ClassDirectoriesInPathOrder) {
  TempDir dir("scan");
  Gen gen(51);
  put_image(dir.path() / "zebra" / "b.pgm", gen);
  put_image(dir.path() / "zebra" / "a.pgm", gen);
  put_image(dir.path() / "apple" / "x" / "deep.pgm", gen);
  put_image(dir.path() / ".hidden" / "h.pgm", gen);
  put_image(dir.path() / "stray.pgm", gen);
  put_text(dir.path() / "zebra" / "notes.txt", "not an image");

  lqpat::ScopedWarningCapture warnings;
  const auto ds = lqpat::scan(dir.path());
  ASSERT_EQ(ds.size(), 3u);
  EXPECT_EQ(ds[0].id, "apple/x/deep.pgm");
  EXPECT_EQ(ds[0].label, "x");
  EXPECT_EQ(ds[1].id, "zebra/a.pgm");
  EXPECT_EQ(ds[1].label, "zebra");
  EXPECT_EQ(ds[2].id, "zebra/b.pgm");
  // stray root file and the undecodable text file
  EXPECT_EQ(warnings.messages().size(), 2u);
}

TEST(Scan, LabelManifest) {
  TempDir dir("manifest");
  Gen gen(52);
  put_image(dir.path() / "img1.pgm", gen);
  put_image(dir.path() / "img2.pgm", gen);
  put_text(dir.path() / "labels.csv", "path,label\nimg2.pgm,cat\nimg1.pgm,dog\n");
  const auto ds = lqpat::scan(dir.path());
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].id, "img1.pgm");
  EXPECT_EQ(ds[0].label, "dog");
  EXPECT_EQ(ds[1].label, "cat");
}

TEST(Scan, Errors) {
  TempDir dir("scanerr");
  EXPECT_THROW(lqpat::scan(dir.path() / "missing"), lqpat::IoError);
  try {
    lqpat::scan(dir.path());
    FAIL();
  } catch (const lqpat::IoError& e) {
    EXPECT_NE(std::string(e.what()).find("no images found"), std::string::npos);
  }
}

TEST(Extraction, ExcludesUndersizedAndCountsComparisons) {
  TempDir dir("extract");
  Gen gen(53);
  put_image(dir.path() / "a" / "1.pgm", gen, 9, 7);
  put_image(dir.path() / "a" / "tiny.pgm", gen, 3, 10);
  put_image(dir.path() / "b" / "2.pgm", gen, 5, 5);
  const auto images = lqpat::scan(dir.path());
  lqpat::ScopedWarningCapture warnings;
  const auto res = lqpat::extract_all(images, {lqpat::DescriptorKind::kLqpat});
  ASSERT_EQ(res.features.size(), 2u);
  EXPECT_EQ(res.excluded, std::vector<std::string>{"a/tiny.pgm"});
  EXPECT_EQ(warnings.messages().size(), 1u);
  EXPECT_EQ(res.comparisons, 16u * (6 * 4 + 2 * 2));
  EXPECT_EQ(res.features[0].payload, lqpat::extract(images[0].payload, {}));

  lqpat::ImageDataset tiny;
  tiny.add({"t", "a", lqpat::GrayImage(2, 2, {1, 2, 3, 4})});
  EXPECT_THROW(lqpat::extract_all(tiny, {lqpat::DescriptorKind::kLbp}), lqpat::ArgumentError);
}

TEST(FeatureStore, RoundTripIsExact) {
  Gen gen(54);
  lqpat::ImageDataset images;
  images.add({"c1/a,b.pgm", "c1", testing_support::random_image(gen, 13, 11)});
  images.add({"c2/\"q\".pgm", "c2", testing_support::random_image(gen, 21, 5)});
  for (auto kind : {lqpat::DescriptorKind::kLqpat, lqpat::DescriptorKind::kLbp,
                    lqpat::DescriptorKind::kCslbp}) {
    for (bool normalize : {true, false}) {
      const lqpat::DescriptorSpec spec{kind, 3, normalize};
      const lqpat::FeatureStore store{spec, lqpat::extract_all(images, spec).features};
      const auto text = lqpat::serialize_features(store);
      EXPECT_EQ(lqpat::parse_features(text), store);
      EXPECT_EQ(lqpat::serialize_features(lqpat::parse_features(text)), text);
    }
  }
  // awkward doubles survive
  lqpat::FeatureDataset ds;
  std::vector<double> bins(16, 0.0);
  bins[0] = 0.1;
  bins[1] = 1.0 / 3.0;
  bins[2] = 5e-324;
  bins[3] = 1.7976931348623157e308;
  ds.add({"x", "y", {bins, true}});
  const lqpat::FeatureStore store{{lqpat::DescriptorKind::kCslbp}, ds};
  EXPECT_EQ(lqpat::parse_features(lqpat::serialize_features(store)), store);
}

TEST(FeatureStore, FileRoundTrip) {
  TempDir dir("store");
  lqpat::FeatureDataset ds;
  ds.add({"x", "y", {std::vector<double>(16, 0.0625), true}});
  const lqpat::FeatureStore store{{lqpat::DescriptorKind::kCslbp}, ds};
  lqpat::save_features(dir.path() / "f.csv", store);
  EXPECT_EQ(lqpat::load_features(dir.path() / "f.csv"), store);
}

TEST(FeatureStore, TypedErrors) {
  using Kind = FeatureStoreError::Kind;
  lqpat::FeatureDataset ds;
  ds.add({"x", "y", {std::vector<double>(16, 0.0625), true}});
  const auto good = lqpat::serialize_features({{lqpat::DescriptorKind::kCslbp}, ds});

  EXPECT_EQ(store_error_kind("# lqpat-features v2 descriptor=cslbp threshold=0\n"),
            Kind::kVersionMismatch);
  EXPECT_EQ(store_error_kind("id,label,normalized,b0\nx,y,true,1\n"), Kind::kVersionMismatch);
  EXPECT_EQ(store_error_kind(good.substr(0, good.size() - 5)), Kind::kTruncated);
  EXPECT_EQ(store_error_kind(""), Kind::kTruncated);

  std::string short_row = good;
  short_row.replace(short_row.rfind(",0.0625\n"), 8, "\n");
  EXPECT_EQ(store_error_kind(short_row), Kind::kInconsistentBinCount);

  std::string wrong_kind = good;
  wrong_kind.replace(wrong_kind.find("cslbp"), 5, "lbp");
  EXPECT_EQ(store_error_kind(wrong_kind), Kind::kInconsistentBinCount);

  std::string bad_value = good;
  bad_value.replace(bad_value.rfind("0.0625"), 6, "abc");
  EXPECT_EQ(store_error_kind(bad_value), Kind::kMalformed);

  std::string duplicate = good + good.substr(good.rfind("x,y,"));
  EXPECT_EQ(store_error_kind(duplicate), Kind::kMalformed);

  TempDir dir("storeerr");
  EXPECT_THROW(lqpat::load_features(dir.path() / "none.csv"), lqpat::IoError);
}

TEST(FeatureStore, RefusesEmptyOrMixedStores) {
  EXPECT_THROW(lqpat::serialize_features({}), lqpat::ArgumentError);
  lqpat::FeatureDataset ds;
  ds.add({"x", "y", {std::vector<double>(16, 0.0), false}});
  ds.add({"z", "y", {std::vector<double>(15, 0.0), false}});
  EXPECT_THROW(lqpat::serialize_features({{lqpat::DescriptorKind::kCslbp, 0, false}, ds}),
               lqpat::ArgumentError);
}

TEST(Digest, Sha256KnownVectors) {
  EXPECT_EQ(lqpat::sha256_hex(""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(lqpat::sha256_hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

}  // namespace

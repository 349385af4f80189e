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

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include "lqpat/parallel.hpp"

namespace lqpat {
namespace fs = std::filesystem;

namespace {

constexpr std::string_view kStoreMagic = "# lqpat-features v";
constexpr int kStoreVersion = 1;

// ---------------------------------------------------------------------------
// Minimal CSV: fields may be double-quoted with "" as an escaped quote.

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::optional<std::vector<std::string>> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"' && cur.empty() && !was_quoted) {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      was_quoted = false;
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) return std::nullopt;
  fields.push_back(std::move(cur));
  return fields;
}

std::string format_bin(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw ArgumentError("cannot format bin value");
  return std::string(buf, ptr);
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  return lines;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

[[noreturn]] void store_error(FeatureStoreError::Kind kind, const std::string& msg) {
  throw FeatureStoreError(kind, "feature store: " + msg);
}

bool is_hidden(const fs::path& p) {
  const auto name = p.filename().string();
  return !name.empty() && name.front() == '.';
}

// Relative paths from labels.csv, sorted.
std::vector<std::pair<std::string, std::string>> read_label_manifest(const fs::path& root) {
  const auto text = read_file(root / kLabelManifest);
  std::vector<std::pair<std::string, std::string>> entries;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view line = lines[i];
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (!fields || fields->size() != 2) {
      throw IoError(std::string(kLabelManifest) + ":" + std::to_string(i + 1) +
                    ": expected 'path,label'");
    }
    if (i == 0 && (*fields)[0] == "path" && (*fields)[1] == "label") continue;
    entries.emplace_back((*fields)[0], (*fields)[1]);
  }
  std::sort(entries.begin(), entries.end());
  return entries;
}

}  // namespace

ImageDataset scan(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec))
    throw IoError("dataset root " + root.string() + " is not a directory");

  std::vector<std::pair<std::string, std::string>> candidates;  // (relative path, label)
  if (fs::exists(root / kLabelManifest)) {
    candidates = read_label_manifest(root);
  } else {
    for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator();
         ++it) {
      if (is_hidden(it->path())) {
        if (it->is_directory()) it.disable_recursion_pending();
        continue;
      }
      if (!it->is_regular_file()) continue;
      const auto rel = fs::relative(it->path(), root);
      if (!rel.has_parent_path()) {
        warn(rel.generic_string() +
             ": file sits directly in the dataset root (no class directory); skipped");
        continue;
      }
      candidates.emplace_back(rel.generic_string(), rel.parent_path().filename().string());
    }
    std::sort(candidates.begin(), candidates.end());
  }

  ImageDataset ds;
  for (auto& [rel, label] : candidates) {
    try {
      ds.add({rel, label, read_image(root / fs::path(rel))});
    } catch (const IoError& e) {
      warn(std::string("skipping undecodable file ") + rel + ": " + e.what());
    } catch (const DimensionError& e) {
      warn(std::string("skipping undecodable file ") + rel + ": " + e.what());
    }
  }
  if (ds.empty()) throw IoError("no images found under " + root.string());
  return ds;
}

ExtractionResult extract_all(const ImageDataset& ds, const DescriptorSpec& spec,
                             const ExtractOptions& options) {
  ComparisonCounter counter;
  ExtractOptions per_image = options;
  per_image.isa = options.isa.value_or(simd::active_isa());
  per_image.counter = &counter;

  const std::size_t min = min_image_side(spec.kind);
  std::vector<std::optional<FeatureVector>> vectors(ds.size());
  parallel::for_each_index(ds.size(), [&](std::size_t i) {
    const auto& img = ds[i].payload;
    if (img.width() < min || img.height() < min) return;
    vectors[i] = extract(img, spec, per_image);
  });

  ExtractionResult result;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto& rec = ds[i];
    if (!vectors[i]) {
      warn(rec.id + ": " + std::to_string(rec.payload.width()) + "x" +
           std::to_string(rec.payload.height()) + " is below the " +
           std::string(descriptor_name(spec.kind)) + " minimum of " + std::to_string(min) + "x" +
           std::to_string(min) + "; excluded");
      result.excluded.push_back(rec.id);
      continue;
    }
    result.features.add({rec.id, rec.label, std::move(*vectors[i])});
  }
  if (result.features.empty()) throw ArgumentError("every record was excluded from extraction");
  result.comparisons = counter.total();
  if (options.counter != nullptr) options.counter->add(result.comparisons);
  return result;
}

std::string serialize_features(const FeatureStore& store) {
  const auto& records = store.dataset.records();
  if (records.empty()) throw ArgumentError("refusing to save an empty feature store");
  const std::size_t bins = records.front().payload.size();
  for (const auto& r : records) {
    if (r.payload.size() != bins) {
      throw ArgumentError("inconsistent bin count: '" + r.id + "' has " +
                          std::to_string(r.payload.size()) + ", expected " + std::to_string(bins));
    }
  }

  std::string out;
  out += std::string(kStoreMagic) + std::to_string(kStoreVersion) +
         " descriptor=" + std::string(descriptor_name(store.spec.kind)) +
         " threshold=" + std::to_string(store.spec.threshold) + "\n";
  out += "id,label,normalized";
  for (std::size_t b = 0; b < bins; ++b) out += ",b" + std::to_string(b);
  out += "\n";
  for (const auto& r : records) {
    out += csv_field(r.id) + "," + csv_field(r.label) + "," +
           (r.payload.normalized ? "true" : "false");
    for (double v : r.payload.bins) out += "," + format_bin(v);
    out += "\n";
  }
  return out;
}

FeatureStore parse_features(std::string_view text) {
  using Kind = FeatureStoreError::Kind;
  if (text.empty()) store_error(Kind::kTruncated, "file is empty");
  if (text.back() != '\n') store_error(Kind::kTruncated, "last line is not terminated");
  const auto lines = split_lines(text);

  // Version line.
  const std::string_view first = lines[0];
  if (first.substr(0, kStoreMagic.size()) != kStoreMagic) {
    store_error(Kind::kVersionMismatch, "missing '# lqpat-features v1' header");
  }
  std::istringstream meta{std::string(first.substr(kStoreMagic.size()))};
  int version = 0;
  meta >> version;
  if (version != kStoreVersion) {
    store_error(Kind::kVersionMismatch, "format version " + std::to_string(version) +
                                            ", this build reads v" + std::to_string(kStoreVersion));
  }
  FeatureStore store;
  std::string token;
  bool have_descriptor = false;
  while (meta >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    const auto key = token.substr(0, eq);
    const auto value = token.substr(eq + 1);
    if (key == "descriptor") {
      const auto kind = parse_descriptor(value);
      if (!kind) store_error(Kind::kMalformed, "unknown descriptor '" + value + "'");
      store.spec.kind = *kind;
      have_descriptor = true;
    } else if (key == "threshold") {
      const auto [p, ec] =
          std::from_chars(value.data(), value.data() + value.size(), store.spec.threshold);
      if (ec != std::errc() || p != value.data() + value.size() || store.spec.threshold < 0) {
        store_error(Kind::kMalformed, "bad threshold '" + value + "'");
      }
    }
  }
  if (!have_descriptor) store_error(Kind::kMalformed, "header names no descriptor");

  if (lines.size() < 2) store_error(Kind::kTruncated, "column header missing");
  const auto header = split_csv_line(lines[1]);
  if (!header || header->size() < 4 || (*header)[0] != "id" || (*header)[1] != "label" ||
      (*header)[2] != "normalized") {
    store_error(Kind::kMalformed, "column header must start with id,label,normalized");
  }
  const std::size_t bins = header->size() - 3;
  for (std::size_t b = 0; b < bins; ++b) {
    if ((*header)[3 + b] != "b" + std::to_string(b)) {
      store_error(Kind::kMalformed,
                  "column " + std::to_string(4 + b) + " should be b" + std::to_string(b));
    }
  }
  if (bins != bin_count(store.spec.kind)) {
    store_error(Kind::kInconsistentBinCount,
                "inconsistent bin count: header has " + std::to_string(bins) + " bins, " +
                    std::string(descriptor_name(store.spec.kind)) + " uses " +
                    std::to_string(bin_count(store.spec.kind)));
  }

  std::optional<bool> normalized;
  for (std::size_t li = 2; li < lines.size(); ++li) {
    const std::string where = "line " + std::to_string(li + 1);
    const auto fields = split_csv_line(lines[li]);
    if (!fields) store_error(Kind::kMalformed, where + ": unterminated quote");
    if (fields->size() != bins + 3) {
      store_error(Kind::kInconsistentBinCount,
                  "inconsistent bin count: " + where + " has " +
                      std::to_string(fields->size() < 3 ? 0 : fields->size() - 3) +
                      " bins, header declares " + std::to_string(bins));
    }
    FeatureVector fv;
    const auto& flag = (*fields)[2];
    if (flag == "true") {
      fv.normalized = true;
    } else if (flag != "false") {
      store_error(Kind::kMalformed, where + ": normalized must be true or false");
    }
    if (normalized && *normalized != fv.normalized) {
      store_error(Kind::kMalformed, where + ": mixed normalization flags");
    }
    normalized = fv.normalized;
    fv.bins.resize(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      const auto& f = (*fields)[3 + b];
      const auto [p, ec] = std::from_chars(f.data(), f.data() + f.size(), fv.bins[b]);
      if (ec != std::errc() || p != f.data() + f.size() || !(fv.bins[b] >= 0.0)) {
        store_error(Kind::kMalformed, where + ": bad bin value '" + f + "'");
      }
    }
    try {
      store.dataset.add({(*fields)[0], (*fields)[1], std::move(fv)});
    } catch (const ArgumentError& e) {
      store_error(Kind::kMalformed, where + ": " + e.what());
    }
  }
  if (store.dataset.empty()) store_error(Kind::kTruncated, "no feature rows");
  store.spec.normalize = *normalized;
  return store;
}

void save_features(const fs::path& path, const FeatureStore& store) {
  const auto text = serialize_features(store);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

FeatureStore load_features(const fs::path& path) {
  const auto text = read_file(path);
  try {
    return parse_features(text);
  } catch (const FeatureStoreError& e) {
    throw FeatureStoreError(e.kind(), path.string() + ": " + e.what());
  }
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace lqpat

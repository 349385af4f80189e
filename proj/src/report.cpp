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

#include "lqpat/report.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "lqpat/error.hpp"

namespace lqpat::report {

std::string format_decimal(double value) {
  char buf[64];
  // to_chars ignores the C locale, unlike snprintf.
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 9);
  if (ec != std::errc()) throw ArgumentError("cannot format value");
  return std::string(buf, ptr);
}

std::string curve_csv(std::string_view x_header, std::string_view y_header,
                      const std::vector<CurvePoint>& points) {
  std::string out;
  out.append(x_header).append(",").append(y_header).append("\n");
  for (const auto& p : points) {
    out.append(std::to_string(p.x)).append(",").append(format_decimal(p.value)).append("\n");
  }
  return out;
}

std::string summary_csv(const Summary& rows) {
  std::string out = "metric,value\n";
  for (const auto& [metric, value] : rows) {
    out.append(metric).append(",").append(format_decimal(value)).append("\n");
  }
  return out;
}

namespace {

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

}  // namespace

std::string query_rows_csv(const EvaluationReport& report) {
  std::size_t n_max = 0;
  for (const auto& row : report.rows) n_max = std::max(n_max, row.precision.size());
  std::string out = "id,label,ground_truth,nmrr,first_relevant_rank,rank1_match";
  for (std::size_t n = 1; n <= n_max; ++n) out += ",p@" + std::to_string(n);
  for (std::size_t n = 1; n <= n_max; ++n) out += ",r@" + std::to_string(n);
  out += "\n";
  for (const auto& row : report.rows) {
    out += csv_field(row.id) + "," + csv_field(row.label) + "," + std::to_string(row.ground_truth) +
           ",";
    out += row.retrieval_scored() ? format_decimal(row.nmrr) : std::string();
    out += "," + std::to_string(row.first_relevant_rank) + "," + (row.rank1_match ? "1" : "0");
    for (std::size_t n = 0; n < n_max; ++n) {
      out += ",";
      if (n < row.precision.size()) out += format_decimal(row.precision[n]);
    }
    for (std::size_t n = 0; n < n_max; ++n) {
      out += ",";
      if (n < row.recall.size()) out += format_decimal(row.recall[n]);
    }
    out += "\n";
  }
  return out;
}

std::string cross_validation_csv(const std::vector<CrossValResult>& results) {
  std::string out = "probe_fraction,folds,recognition_rate\n";
  for (const auto& r : results) {
    out += format_decimal(r.config.probe_fraction) + "," + std::to_string(r.folds.size()) + "," +
           format_decimal(r.mean_rate) + "\n";
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace lqpat::report

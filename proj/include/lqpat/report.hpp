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

// CSV serialization of evaluation results. All files use '\n' line endings,
// '.' as decimal separator and 9 significant digits.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lqpat/evaluation.hpp"

namespace lqpat::report {

/// printf "%.9g", locale independent.
std::string format_decimal(double value);

std::string curve_csv(std::string_view x_header, std::string_view y_header,
                      const std::vector<CurvePoint>& points);

using Summary = std::vector<std::pair<std::string, double>>;

/// `metric,value` rows.
std::string summary_csv(const Summary& rows);

/// id,label,ground_truth,nmrr,first_relevant_rank,rank1_match, then p@n and
/// r@n columns for n = 1..n_max.
std::string query_rows_csv(const EvaluationReport& report);

/// probe_fraction,folds,recognition_rate
std::string cross_validation_csv(const std::vector<CrossValResult>& results);

/// Writes `content` verbatim. Throws IoError.
void write_text(const std::filesystem::path& path, std::string_view content);

}  // namespace lqpat::report

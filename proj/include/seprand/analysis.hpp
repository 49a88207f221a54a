// Copyright 2026 The seprand Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SEPRAND_ANALYSIS_HPP_
#define SEPRAND_ANALYSIS_HPP_

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seprand/types.hpp"

namespace seprand {

/// Fraction of `records` whose accuracy is strictly above the baseline's.
/// Records must come from the baseline's split.
double effective_ratio(std::span<const ScoreRecord> records,
                       const ScoreRecord& baseline);

/// Rounds half away from zero at `decimals` places, tolerant of the binary
/// representation error of values such as 23.35.
double round_half_up(double value, int decimals);

/// 100 * (score - baseline) / baseline, unrounded.
double relative_improvement_raw(double score, double baseline);

/// relative_improvement_raw rounded to one decimal.
double relative_improvement(double score, double baseline);

double mean(std::span<const double> values);

// ---------------------------------------------------------------------------
// Transfer matrices.

enum class TransferBand { kNone, kLow, kModerate, kHigh };

std::string_view to_string(TransferBand band);

/// ratio >= high -> kHigh, >= moderate -> kModerate, else kLow.
TransferBand classify_transfer(double ratio, double moderate = 0.8,
                               double high = 0.9);

struct TransferMatrix {
  std::vector<std::string> row_keys;  // sources
  std::vector<std::string> col_keys;  // targets
  /// values[r][c]; nullopt where evaluation failed.
  std::vector<std::vector<std::optional<double>>> values;
  double moderate_threshold = 0.8;
  double high_threshold = 0.9;

  /// Self-score of row r (its own key's column), if present.
  std::optional<double> diagonal(std::size_t row) const;
  /// Band of cell (r, c) relative to the row's self-score.
  TransferBand band(std::size_t row, std::size_t col) const;
};

using TransferEval =
    std::function<double(const Separator& separator, const std::string& target)>;

/// values[s][t] = eval(best[s], t). Every source key must be among
/// `targets`. A throwing eval leaves the cell empty.
TransferMatrix build_transfer_matrix(
    const std::map<std::string, Separator>& best_by_source,
    const std::vector<std::string>& targets, const TransferEval& eval);

/// Wide CSV: "source,<targets...>", empty cells for missing values.
std::string transfer_matrix_csv(const TransferMatrix& matrix);
/// Same grid holding band names.
std::string transfer_bands_csv(const TransferMatrix& matrix);

// ---------------------------------------------------------------------------
// Curves.

/// Best-so-far rows of a finished search, recomputed from its records.
std::vector<CurvePoint> emit_curve(const SearchResult& result);

/// Header "iteration,best_accuracy", one row per curve point.
std::string emit_curve_csv(std::span<const CurvePoint> curve);

}  // namespace seprand

#endif  // SEPRAND_ANALYSIS_HPP_

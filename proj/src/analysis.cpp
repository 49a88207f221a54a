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

#include "seprand/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "seprand/error.hpp"
#include "seprand/search.hpp"

namespace seprand {

double effective_ratio(std::span<const ScoreRecord> records,
                       const ScoreRecord& baseline) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptySearch, "effective ratio of no records");
  }
  std::size_t better = 0;
  for (const auto& r : records) {
    if (r.split != baseline.split) {
      throw Error(ErrorCode::kIncompatibleRecords,
                  fmt::format("record on {} split compared with a {} baseline",
                              to_string(r.split), to_string(baseline.split)));
    }
    if (accuracy_less(baseline, r)) ++better;
  }
  return static_cast<double>(better) / static_cast<double>(records.size());
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double magnitude = std::floor(std::abs(value) * scale + 0.5 + 1e-9);
  const double out = std::copysign(magnitude / scale, value);
  return out == 0.0 ? 0.0 : out;
}

double relative_improvement_raw(double score, double baseline) {
  if (!(baseline > 0) || !std::isfinite(baseline)) {
    throw Error(ErrorCode::kDomain,
                fmt::format("relative improvement needs a positive baseline "
                            "(got {})",
                            baseline));
  }
  return 100.0 * (score - baseline) / baseline;
}

double relative_improvement(double score, double baseline) {
  return round_half_up(relative_improvement_raw(score, baseline), 1);
}

double mean(std::span<const double> values) {
  if (values.empty()) {
    throw Error(ErrorCode::kDomain, "mean of an empty set");
  }
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

std::string_view to_string(TransferBand band) {
  switch (band) {
    case TransferBand::kNone: return "none";
    case TransferBand::kLow: return "low";
    case TransferBand::kModerate: return "moderate";
    case TransferBand::kHigh: return "high";
  }
  return "none";
}

TransferBand classify_transfer(double ratio, double moderate, double high) {
  if (ratio >= high) return TransferBand::kHigh;
  if (ratio >= moderate) return TransferBand::kModerate;
  return TransferBand::kLow;
}

std::optional<double> TransferMatrix::diagonal(std::size_t row) const {
  const auto it = std::find(col_keys.begin(), col_keys.end(), row_keys.at(row));
  if (it == col_keys.end()) return std::nullopt;
  return values.at(row).at(static_cast<std::size_t>(it - col_keys.begin()));
}

TransferBand TransferMatrix::band(std::size_t row, std::size_t col) const {
  const auto self = diagonal(row);
  const auto& cell = values.at(row).at(col);
  if (!self || !cell || *self <= 0) return TransferBand::kNone;
  return classify_transfer(*cell / *self, moderate_threshold, high_threshold);
}

TransferMatrix build_transfer_matrix(
    const std::map<std::string, Separator>& best_by_source,
    const std::vector<std::string>& targets, const TransferEval& eval) {
  TransferMatrix m;
  m.col_keys = targets;
  for (const auto& [source, separator] : best_by_source) {
    if (std::find(targets.begin(), targets.end(), source) == targets.end()) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("source '{}' is not among the targets", source));
    }
    m.row_keys.push_back(source);
    auto& row = m.values.emplace_back();
    for (const auto& target : targets) {
      try {
        row.emplace_back(eval(separator, target));
      } catch (const std::exception&) {
        row.emplace_back(std::nullopt);
      }
    }
  }
  return m;
}

namespace {

template <typename Cell>
std::string grid_csv(const TransferMatrix& m, Cell&& cell) {
  std::string out = "source";
  for (const auto& c : m.col_keys) out += "," + c;
  out += "\n";
  for (std::size_t r = 0; r < m.row_keys.size(); ++r) {
    out += m.row_keys[r];
    for (std::size_t c = 0; c < m.col_keys.size(); ++c) {
      out += "," + cell(r, c);
    }
    out += "\n";
  }
  return out;
}

}  // namespace

std::string transfer_matrix_csv(const TransferMatrix& matrix) {
  return grid_csv(matrix, [&](std::size_t r, std::size_t c) {
    const auto& v = matrix.values[r][c];
    return v ? fmt::format("{}", *v) : std::string();
  });
}

std::string transfer_bands_csv(const TransferMatrix& matrix) {
  return grid_csv(matrix, [&](std::size_t r, std::size_t c) {
    return std::string(to_string(matrix.band(r, c)));
  });
}

std::vector<CurvePoint> emit_curve(const SearchResult& result) {
  if (result.records.empty()) {
    throw Error(ErrorCode::kEmptySearch, "curve of an empty search");
  }
  return best_so_far_curve(result.records);
}

std::string emit_curve_csv(std::span<const CurvePoint> curve) {
  std::string out = "iteration,best_accuracy\n";
  for (const auto& p : curve) {
    out += fmt::format("{},{}\n", p.iteration, p.best_accuracy);
  }
  return out;
}

}  // namespace seprand

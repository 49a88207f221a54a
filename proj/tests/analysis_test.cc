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

#include <gtest/gtest.h>

#include "seprand/error.hpp"
#include "seprand/search.hpp"

namespace seprand {
namespace {

ScoreRecord rec(std::uint32_t correct, std::uint32_t n = 10,
                Split split = Split::kTrain, std::uint64_t iteration = 0) {
  ScoreRecord r;
  r.separator = {"s", Strategy::kRandomVocabulary, iteration, 0};
  r.split = split;
  r.n_correct = correct;
  r.n_evaluated = n;
  return r;
}

TEST(EffectiveRatioTest, StrictlyAboveBaseline) {
  const std::vector<ScoreRecord> r = {rec(3), rec(6), rec(7)};
  EXPECT_DOUBLE_EQ(effective_ratio(r, rec(5)), 2.0 / 3.0);
  const std::vector<ScoreRecord> ties = {rec(5), rec(1, 2)};
  EXPECT_DOUBLE_EQ(effective_ratio(ties, rec(5)), 0.0);
}

TEST(EffectiveRatioTest, SplitMismatchRejected) {
  const std::vector<ScoreRecord> r = {rec(3, 10, Split::kTest)};
  try {
    effective_ratio(r, rec(5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIncompatibleRecords);
  }
  EXPECT_THROW(effective_ratio({}, rec(5)), Error);
}

TEST(RoundingTest, HalfUp) {
  EXPECT_DOUBLE_EQ(round_half_up(23.35, 1), 23.4);
  EXPECT_DOUBLE_EQ(round_half_up(22.77, 1), 22.8);
  EXPECT_DOUBLE_EQ(round_half_up(-7.15, 1), -7.2);
  EXPECT_DOUBLE_EQ(round_half_up(0.04, 1), 0.0);
}

// Relative improvements over the "Answer:" baseline for GPT2-Large
// (baseline 50.5) and GPT2-XL (baseline 50.3).
TEST(RelativeImprovementTest, ReportedTableValues) {
  struct Row {
    double score;
    double want;
  };
  const Row large[] = {{46.9, -7.1}, {44.5, -11.9}, {62.0, 22.8},
                       {62.1, 23.0}, {62.3, 23.4},  {62.8, 24.4},
                       {63.6, 25.9}};
  for (const auto& row : large) {
    EXPECT_DOUBLE_EQ(relative_improvement(row.score, 50.5), row.want)
        << row.score;
  }
  EXPECT_DOUBLE_EQ(relative_improvement(45.1, 50.3), -10.3);
}

TEST(RelativeImprovementTest, NeedsPositiveBaseline) {
  try {
    relative_improvement(1.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDomain);
  }
}

TEST(MeanTest, Basic) {
  const std::vector<double> v = {1, 2, 6};
  EXPECT_DOUBLE_EQ(mean(v), 3.0);
  EXPECT_THROW(mean(std::vector<double>{}), Error);
}

TEST(TransferTest, Bands) {
  EXPECT_EQ(classify_transfer(0.95), TransferBand::kHigh);
  EXPECT_EQ(classify_transfer(0.9), TransferBand::kHigh);
  EXPECT_EQ(classify_transfer(0.85), TransferBand::kModerate);
  EXPECT_EQ(classify_transfer(0.8), TransferBand::kModerate);
  EXPECT_EQ(classify_transfer(0.79), TransferBand::kLow);
}

TEST(TransferTest, SingleCellMatrix) {
  const std::map<std::string, Separator> best = {{"a", fixed_separator("s")}};
  const auto m = build_transfer_matrix(
      best, {"a"}, [](const Separator&, const std::string&) { return 0.5; });
  ASSERT_EQ(m.values.size(), 1u);
  EXPECT_EQ(m.values[0][0], 0.5);
  EXPECT_EQ(m.band(0, 0), TransferBand::kHigh);
  EXPECT_EQ(transfer_matrix_csv(m), "source,a\na,0.5\n");
  EXPECT_EQ(transfer_bands_csv(m), "source,a\na,high\n");
}

TEST(TransferTest, ThreeByThree) {
  const std::map<std::string, Separator> best = {
      {"a", fixed_separator("A")},
      {"b", fixed_separator("B")},
      {"c", fixed_separator("C")}};
  const std::map<std::pair<std::string, std::string>, double> table = {
      {{"A", "a"}, 0.8}, {{"A", "b"}, 0.6}, {{"A", "c"}, 0.7},
      {{"B", "a"}, 0.5}, {{"B", "b"}, 0.5}, {{"B", "c"}, 0.42},
      {{"C", "a"}, 0.1}, {{"C", "c"}, 0.9}};
  const auto m = build_transfer_matrix(
      best, {"a", "b", "c"}, [&](const Separator& s, const std::string& t) {
        return table.at({s.text, t});
      });
  ASSERT_EQ(m.row_keys, (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_EQ(m.diagonal(1), 0.5);
  EXPECT_EQ(m.band(0, 1), TransferBand::kLow);       // 0.75
  EXPECT_EQ(m.band(0, 2), TransferBand::kModerate);  // 0.875
  EXPECT_EQ(m.band(1, 0), TransferBand::kHigh);      // 1.0
  EXPECT_EQ(m.band(1, 2), TransferBand::kModerate);  // 0.84
  EXPECT_FALSE(m.values[2][1].has_value());
  EXPECT_EQ(m.band(2, 1), TransferBand::kNone);
  EXPECT_EQ(transfer_matrix_csv(m),
            "source,a,b,c\na,0.8,0.6,0.7\nb,0.5,0.5,0.42\nc,0.1,,0.9\n");
  EXPECT_EQ(transfer_bands_csv(m),
            "source,a,b,c\na,high,low,moderate\nb,high,high,moderate\n"
            "c,low,none,high\n");
}

TEST(TransferTest, SourceMustBeATarget) {
  const std::map<std::string, Separator> best = {{"x", fixed_separator("s")}};
  EXPECT_THROW(build_transfer_matrix(best, {"a"},
                                     [](const Separator&, const std::string&) {
                                       return 1.0;
                                     }),
               Error);
}

TEST(CurveTest, CsvFromSearchResult) {
  SearchResult result;
  result.records = {rec(2, 10, Split::kTrain, 0), rec(1, 10, Split::kTrain, 1),
                    rec(5, 10, Split::kTrain, 2)};
  const auto curve = emit_curve(result);
  EXPECT_EQ(emit_curve_csv(curve),
            "iteration,best_accuracy\n0,0.2\n1,0.2\n2,0.5\n");
  EXPECT_THROW(emit_curve(SearchResult{}), Error);
}

}  // namespace
}  // namespace seprand

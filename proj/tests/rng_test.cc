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

#include "seprand/rng.hpp"

#include <set>

#include <gtest/gtest.h>

#include "seprand/error.hpp"

// Expected values come from tests/oracles/oracle.py.

namespace seprand {
namespace {

TEST(Fnv1a64Test, PublishedVectors) {
  EXPECT_EQ(hex64(fnv1a64("")), "cbf29ce484222325");
  EXPECT_EQ(hex64(fnv1a64("a")), "af63dc4c8601ec8c");
  EXPECT_EQ(hex64(fnv1a64("foobar")), "85944171f73967e8");
}

TEST(Fnv1a64Test, IncrementalMatchesOneShot) {
  EXPECT_EQ(Fnv1a64().update("foo").update("bar").digest(), fnv1a64("foobar"));
  EXPECT_EQ(Fnv1a64().update("a").update_byte(0x1F).update("b").digest(),
            fnv1a64("a\x1f" "b"));
}

TEST(SplitMix64Test, SeedZero) {
  SplitMix64 sm(0);
  EXPECT_EQ(hex64(sm.next()), "e220a8397b1dcdaf");
  EXPECT_EQ(hex64(sm.next()), "6e789e6aa1b965f4");
  EXPECT_EQ(hex64(sm.next()), "06c45d188009454f");
}

TEST(Xoshiro256Test, Seed42Stream) {
  Xoshiro256 rng(42);
  EXPECT_EQ(hex64(rng.next()), "15780b2e0c2ec716");
  EXPECT_EQ(hex64(rng.next()), "6104d9866d113a7e");
  EXPECT_EQ(hex64(rng.next()), "ae17533239e499a1");
  EXPECT_EQ(hex64(rng.next()), "ecb8ad4703b360a1");
}

TEST(Xoshiro256Test, UniformSeed7) {
  Xoshiro256 rng(7);
  std::vector<std::uint64_t> got;
  for (int i = 0; i < 8; ++i) got.push_back(rng.uniform(10));
  EXPECT_EQ(got, (std::vector<std::uint64_t>{4, 4, 8, 4, 4, 1, 6, 6}));
}

TEST(Xoshiro256Test, UniformStaysInRange) {
  Xoshiro256 rng(1);
  for (std::uint64_t bound : {1ULL, 2ULL, 3ULL, 1000ULL, (1ULL << 63) + 1}) {
    for (int i = 0; i < 200; ++i) EXPECT_LT(rng.uniform(bound), bound);
  }
}

TEST(Xoshiro256Test, UniformRejectsZeroBound) {
  Xoshiro256 rng(1);
  EXPECT_THROW(rng.uniform(0), Error);
}

TEST(DeriveSeedTest, OracleValues) {
  EXPECT_EQ(hex64(derive_seed(0, 0)), "6e789e6aa1b965f4");
  EXPECT_EQ(hex64(derive_seed(0, 1)), "bfa9ae8d44b45a35");
  EXPECT_EQ(hex64(derive_seed(11, 3)), "9ace8abfd6175027");
  EXPECT_EQ(hex64(derive_seed(~0ULL, 5)), "e3edd82a13167254");
}

TEST(DeriveSeedTest, DistinctAcrossIndices) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(derive_seed(5, i));
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(SampleWithoutReplacementTest, OracleDraw) {
  Xoshiro256 rng(3);
  EXPECT_EQ(sample_without_replacement(rng, 10, 4),
            (std::vector<std::size_t>{8, 2, 3, 1}));
}

TEST(SampleWithoutReplacementTest, DistinctAndInRange) {
  Xoshiro256 rng(9);
  const auto picks = sample_without_replacement(rng, 50, 50);
  EXPECT_EQ(std::set<std::size_t>(picks.begin(), picks.end()).size(), 50u);
  EXPECT_LT(*std::max_element(picks.begin(), picks.end()), 50u);
}

TEST(SampleWithoutReplacementTest, TooManyIsInsufficientData) {
  Xoshiro256 rng(9);
  try {
    sample_without_replacement(rng, 3, 4);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInsufficientData);
  }
}

}  // namespace
}  // namespace seprand

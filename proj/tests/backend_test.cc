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

#include "seprand/backend.hpp"

#include <cmath>
#include <fstream>
#include <thread>

#include <gmock/gmock.h>
#include <gtest/gtest.h>

#include "seprand/error.hpp"
#include "seprand/rng.hpp"
#include "test_support.hpp"

// Mock values are pinned from tests/oracles/oracle.py.

namespace seprand {
namespace {

using ::testing::HasSubstr;

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kInvalidState;
}

TEST(MockLogprobTest, EmptyPairIsDelimiterHash) {
  EXPECT_DOUBLE_EQ(hash_mock_logprob("", ""),
                   -10.0 * (static_cast<double>(fnv1a64("\x1f")) /
                            18446744073709551616.0));
  EXPECT_DOUBLE_EQ(hash_mock_logprob("", ""), -6.851169049095981);
}

TEST(MockLogprobTest, DelimiterSeparatesFields) {
  EXPECT_DOUBLE_EQ(hash_mock_logprob("a", "b"), -8.981115280223372);
  EXPECT_DOUBLE_EQ(hash_mock_logprob("ab", ""), -9.02832871540575);
  EXPECT_NE(hash_mock_logprob("a", "b"), hash_mock_logprob("ab", ""));
  EXPECT_DOUBLE_EQ(hash_mock_logprob("great film Answer:", " positive"),
                   -2.1790756185194384);
}

TEST(MockLogprobTest, RangeAndPurity) {
  Xoshiro256 rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto p = std::to_string(rng.next());
    const double v = hash_mock_logprob(p, "x");
    EXPECT_LE(v, 0.0);
    EXPECT_GE(v, -10.0);
    EXPECT_EQ(v, hash_mock_logprob(p, "x"));
  }
}

TEST(MockBackendTest, ScoreMatchesHashOracle) {
  MockBackend mock;
  const std::vector<std::string> conts = {"a", "b", "x", "x", " two words"};
  const auto r = score_checked(mock, "p", conts);
  ASSERT_EQ(r.logprobs.size(), conts.size());
  EXPECT_EQ(r.logprobs[0], hash_mock_logprob("p", "a"));
  EXPECT_EQ(r.logprobs[1], hash_mock_logprob("p", "b"));
  EXPECT_EQ(r.logprobs[2], r.logprobs[3]);
  EXPECT_EQ(r.tokens_evaluated, (std::vector<int>{1, 1, 1, 1, 2}));
}

TEST(MockBackendTest, ThreeTokenStreamForQ) {
  MockBackend mock;
  GenParams greedy{.max_tokens = 3, .temperature = 0.0};
  EXPECT_EQ(generate_text(mock, "q", greedy), ": to text");
  GenParams sampled{.max_tokens = 3, .temperature = 1.0, .seed = 5};
  EXPECT_EQ(generate_text(mock, "q", sampled), "! LONDON by");
  sampled.max_tokens = 8;
  sampled.stop = {"\n"};
  EXPECT_EQ(generate_text(mock, "q", sampled),
            "! LONDON by new ! LONDON step positive");
}

TEST(MockBackendTest, GreedyIgnoresSeed) {
  MockBackend mock;
  GenParams a{.max_tokens = 6, .temperature = 0.0, .seed = 1};
  GenParams b{.max_tokens = 6, .temperature = 0.0, .seed = 2};
  EXPECT_EQ(generate_text(mock, "prompt", a), generate_text(mock, "prompt", b));
}

TEST(MockBackendTest, StopStringsTruncate) {
  MockBackend mock;
  // Find a seed whose raw stream contains a newline, then check the stop.
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    GenParams raw{.max_tokens = 12, .temperature = 1.0, .seed = seed};
    const auto text = mock.generate("s", raw).text;
    if (text.find('\n') == std::string::npos) continue;
    raw.stop = {"\n"};
    const auto cut = generate_text(mock, "s", raw);
    EXPECT_EQ(cut.find('\n'), std::string::npos);
    EXPECT_EQ(cut, text.substr(0, text.find('\n')));
    return;
  }
  FAIL() << "no newline in 200 mock streams";
}

TEST(MockBackendTest, VocabularyShape) {
  MockBackend mock;
  const auto v = mock.vocabulary();
  EXPECT_EQ(v.tokens.size(), 63u);
  EXPECT_EQ(v.tokens[0], "<|endoftext|>");
  EXPECT_EQ(v.special, (std::set<std::size_t>{0}));
  EXPECT_EQ(v.tokens[2], "\xC4\xA0the");
}

TEST(ScoreContinuationsTest, Preconditions) {
  MockBackend mock;
  const std::vector<std::string> none;
  const std::vector<std::string> one = {"a"};
  EXPECT_EQ(code_of([&] { score_continuations(mock, "p", none); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(code_of([&] { score_continuations(mock, "", one); }),
            ErrorCode::kInvalidArgument);
}

TEST(ScoreContinuationsTest, ProtocolViolationsNameTheField) {
  auto bad = [](ScoreResponse r) {
    return testing::ScriptedBackend(
        [r](std::string_view, std::span<const std::string>) { return r; });
  };
  const std::vector<std::string> two = {"a", "b"};
  auto short_list = bad({{-1.0}, {1}});
  try {
    score_continuations(short_list, "p", two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
    EXPECT_THAT(e.what(), HasSubstr("logprobs"));
  }
  auto positive = bad({{-1.0, 0.5}, {1, 1}});
  try {
    score_continuations(positive, "p", two);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kProtocol);
    EXPECT_THAT(e.what(), HasSubstr("logprobs[1]"));
  }
  auto no_tokens = bad({{-1.0, -2.0}, {1}});
  EXPECT_EQ(code_of([&] { score_continuations(no_tokens, "p", two); }),
            ErrorCode::kProtocol);
}

TEST(GenParamsTest, Validation) {
  EXPECT_TRUE(validate_gen_params({}).empty());
  EXPECT_FALSE(validate_gen_params({.max_tokens = 0}).empty());
  EXPECT_FALSE(validate_gen_params({.max_tokens = 513}).empty());
  EXPECT_FALSE(validate_gen_params({.temperature = -1}).empty());
  EXPECT_FALSE(validate_gen_params({.stop = {""}}).empty());
  MockBackend mock;
  EXPECT_EQ(code_of([&] { generate_text(mock, "p", {.max_tokens = 600}); }),
            ErrorCode::kInvalidArgument);
}

TEST(CachingBackendTest, TransparentForScores) {
  auto mock = std::make_shared<MockBackend>();
  CachingBackend cached(mock);
  Xoshiro256 rng(12);
  for (int i = 0; i < 300; ++i) {
    const auto prompt = "p" + std::to_string(rng.uniform(20));
    const std::vector<std::string> conts = {
        " c" + std::to_string(rng.uniform(5)),
        " c" + std::to_string(rng.uniform(5))};
    const auto a = cached.score(prompt, conts);
    const auto b = mock->score(prompt, conts);
    EXPECT_EQ(a.logprobs, b.logprobs);
    EXPECT_EQ(a.tokens_evaluated, b.tokens_evaluated);
  }
  EXPECT_GT(cached.hits(), 0u);
  EXPECT_EQ(cached.hits() + cached.misses(), 600u);
}

TEST(CachingBackendTest, OnlyGreedyGenerationsAreCached) {
  int calls = 0;
  auto inner = std::make_shared<testing::ScriptedBackend>(
      [](std::string_view, std::span<const std::string> c) {
        return testing::flat_scores(c);
      },
      [&calls](std::string_view, const GenParams&) {
        ++calls;
        return GenerateResponse{"out " + std::to_string(calls), "length"};
      });
  CachingBackend cached(inner);
  GenParams greedy{.max_tokens = 4, .temperature = 0.0};
  EXPECT_EQ(cached.generate("p", greedy).text, "out 1");
  EXPECT_EQ(cached.generate("p", greedy).text, "out 1");
  GenParams sampled{.max_tokens = 4, .temperature = 1.0, .seed = 1};
  EXPECT_EQ(cached.generate("p", sampled).text, "out 2");
  EXPECT_EQ(cached.generate("p", sampled).text, "out 3");
}

TEST(CachingBackendTest, KeyIncludesModelName) {
  testing::TempDir dir;
  const auto path = dir / "cache.jsonl";
  const std::vector<std::string> conts = {" yes"};
  {
    CachingBackend cached(std::make_shared<MockBackend>("m1"), path);
    cached.score("p", conts);
  }
  CachingBackend other(std::make_shared<MockBackend>("m2"), path);
  other.score("p", conts);
  EXPECT_EQ(other.hits(), 0u);
  EXPECT_EQ(other.misses(), 1u);
}

TEST(CachingBackendTest, PersistsAndSurvivesTornTail) {
  testing::TempDir dir;
  const auto path = dir / "cache.jsonl";
  const std::vector<std::string> conts = {" yes", " no"};
  {
    CachingBackend cached(std::make_shared<MockBackend>(), path);
    cached.score("prompt", conts);
  }
  { std::ofstream(path, std::ios::app) << R"({"kind":"score","mod)"; }

  auto counting = std::make_shared<testing::ScriptedBackend>(
      [](std::string_view p, std::span<const std::string> c) {
        return MockBackend().score(p, c);
      });
  {
    CachingBackend reloaded(counting, path);
    const auto r = reloaded.score("prompt", conts);
    EXPECT_EQ(r.logprobs, MockBackend().score("prompt", conts).logprobs);
    reloaded.score("another", conts);
  }
  // scripted model name differs from "mock": both prompts were misses.
  EXPECT_EQ(counting->score_calls.load(), 2);
  CachingBackend again(counting, path);
  again.score("another", conts);
  EXPECT_EQ(again.hits(), 2u);
}

TEST(CachingBackendTest, MalformedMiddleLineIsParseError) {
  testing::TempDir dir;
  const auto path = dir / "cache.jsonl";
  std::ofstream(path) << "not json\n{}\n";
  EXPECT_EQ(code_of([&] { CachingBackend(std::make_shared<MockBackend>(), path); }),
            ErrorCode::kParse);
}

TEST(ConcurrencyLimitTest, NeverExceedsLimit) {
  for (std::uint32_t limit : {1u, 2u, 3u}) {
    auto inner = std::make_shared<testing::ScriptedBackend>(
        [](std::string_view, std::span<const std::string> c) {
          return testing::flat_scores(c);
        });
    inner->delay = std::chrono::milliseconds(5);
    ConcurrencyLimitedBackend limited(inner, limit);
    std::vector<std::jthread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&] {
        const std::vector<std::string> c = {"x"};
        for (int i = 0; i < 4; ++i) limited.score("p", c);
      });
    }
    threads.clear();
    EXPECT_LE(inner->peak_in_flight.load(), static_cast<int>(limit));
    EXPECT_EQ(inner->peak_in_flight.load(), static_cast<int>(limit));
    EXPECT_EQ(inner->score_calls.load(), 32);
  }
}

TEST(MakeBackendTest, MockStackReportsSpec) {
  BackendSpec spec;
  spec.max_concurrency = 3;
  const auto backend = make_backend(spec);
  EXPECT_EQ(backend->model_name(), "mock");
  EXPECT_EQ(backend->max_concurrency(), 3u);
  spec.max_concurrency = 0;
  EXPECT_EQ(code_of([&] { make_backend(spec); }), ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace seprand

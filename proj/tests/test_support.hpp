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

#ifndef SEPRAND_TESTS_TEST_SUPPORT_HPP_
#define SEPRAND_TESTS_TEST_SUPPORT_HPP_

#include <atomic>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "seprand/backend.hpp"
#include "seprand/types.hpp"

namespace seprand::testing {

inline std::filesystem::path source_dir() { return SEPRAND_SOURCE_DIR; }

inline std::filesystem::path fixture(const std::string& rel) {
  return source_dir() / "tests" / "fixtures" / rel;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("seprand-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& rel) const {
    return path_ / rel;
  }

 private:
  std::filesystem::path path_;
};

/// Backend whose answers come from callbacks; counts calls and the peak
/// number of calls in flight.
class ScriptedBackend final : public Backend {
 public:
  using ScoreFn =
      std::function<ScoreResponse(std::string_view, std::span<const std::string>)>;
  using GenerateFn =
      std::function<GenerateResponse(std::string_view, const GenParams&)>;

  ScriptedBackend(ScoreFn score, GenerateFn generate = {},
                  std::uint32_t max_concurrency = 1)
      : score_(std::move(score)),
        generate_(std::move(generate)),
        max_concurrency_(max_concurrency) {}

  std::string model_name() const override { return "scripted"; }
  std::uint32_t max_concurrency() const override { return max_concurrency_; }

  ScoreResponse score(std::string_view prompt,
                      std::span<const std::string> continuations) override {
    InFlight guard(*this);
    ++score_calls;
    return score_(prompt, continuations);
  }
  GenerateResponse generate(std::string_view prompt,
                            const GenParams& params) override {
    InFlight guard(*this);
    ++generate_calls;
    return generate_(prompt, params);
  }
  Vocabulary vocabulary() override { return vocab; }

  Vocabulary vocab;
  std::atomic<int> score_calls{0};
  std::atomic<int> generate_calls{0};
  std::atomic<int> peak_in_flight{0};
  /// Simulated latency, so that overlapping calls are observable.
  std::chrono::milliseconds delay{0};

 private:
  struct InFlight {
    explicit InFlight(ScriptedBackend& b) : b_(b) {
      const int now = ++b_.in_flight_;
      int peak = b_.peak_in_flight.load();
      while (now > peak && !b_.peak_in_flight.compare_exchange_weak(peak, now)) {
      }
      if (b_.delay.count() > 0) std::this_thread::sleep_for(b_.delay);
    }
    ~InFlight() { --b_.in_flight_; }
    ScriptedBackend& b_;
  };

  ScoreFn score_;
  GenerateFn generate_;
  std::uint32_t max_concurrency_;
  std::atomic<int> in_flight_{0};
};

/// Scores every continuation with the same value.
inline ScoreResponse flat_scores(std::span<const std::string> continuations,
                                 double value = -1.0) {
  ScoreResponse r;
  r.logprobs.assign(continuations.size(), value);
  r.tokens_evaluated.assign(continuations.size(), 1);
  return r;
}

/// A two-label sentiment task held in memory.
inline TaskSpec sentiment_task(std::size_t n_train = 8, std::size_t n_test = 4) {
  TaskSpec task;
  task.name = "sentiment";
  task.labels = {{0, "negative"}, {1, "positive"}};
  for (std::size_t i = 0; i < n_train; ++i) {
    task.train.push_back({"train review " + std::to_string(i),
                          static_cast<int>(i % 2)});
  }
  for (std::size_t i = 0; i < n_test; ++i) {
    task.test.push_back({"test review " + std::to_string(i),
                         static_cast<int>((i + 1) % 2)});
  }
  return task;
}

}  // namespace seprand::testing

#endif  // SEPRAND_TESTS_TEST_SUPPORT_HPP_

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

/// \file
/// Scoring and generation over a language model.
///
/// A Backend answers two questions: how likely is each continuation after a
/// prompt (summed token log-probabilities), and what text does the model
/// produce after a prompt. Implementations must be safe to call from several
/// threads at once; callers never exceed max_concurrency() calls in flight
/// when the backend is wrapped by make_backend().

#ifndef SEPRAND_BACKEND_HPP_
#define SEPRAND_BACKEND_HPP_

#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seprand/types.hpp"

namespace seprand {

inline constexpr std::uint32_t kMaxGenerationTokens = 512;

struct GenParams {
  std::uint32_t max_tokens = 16;
  double temperature = 1.0;
  std::vector<std::string> stop;
  std::optional<std::uint64_t> seed;
};

std::vector<std::string> validate_gen_params(const GenParams& params);

struct ScoreResponse {
  std::vector<double> logprobs;
  std::vector<int> tokens_evaluated;
};

struct GenerateResponse {
  std::string text;
  std::string finish_reason = "length";  // "stop" | "length"
};

class Backend {
 public:
  virtual ~Backend() = default;

  virtual std::string model_name() const = 0;
  virtual std::uint32_t max_concurrency() const { return 1; }

  virtual ScoreResponse score(std::string_view prompt,
                              std::span<const std::string> continuations) = 0;
  virtual GenerateResponse generate(std::string_view prompt,
                                    const GenParams& params) = 0;
  virtual Vocabulary vocabulary() = 0;
};

/// Throws kProtocol naming the offending field when `response` does not
/// match a request with `n_continuations` entries.
void validate_score_response(const ScoreResponse& response,
                             std::size_t n_continuations);

/// Checked scoring: preconditions, then response validation.
ScoreResponse score_checked(Backend& backend, std::string_view prompt,
                            std::span<const std::string> continuations);

/// One total log-probability per continuation, positionally.
std::vector<double> score_continuations(
    Backend& backend, std::string_view prompt,
    std::span<const std::string> continuations);

/// Generated text, cut at the first stop string.
std::string generate_text(Backend& backend, std::string_view prompt,
                          const GenParams& params);

// ---------------------------------------------------------------------------
// Mock backend.

/// -10 * (h / 2^64) with h = FNV-1a 64 over prompt, 0x1F, continuation.
double hash_mock_logprob(std::string_view prompt, std::string_view continuation);

/// Words the mock generator draws from; "\n" is among them.
std::span<const std::string_view> mock_words();

/// Token k of the mock stream for `prompt`: mock_words()[h % 32], where h
/// is the first splitmix64 output seeded with the FNV-1a 64 digest of
/// prompt, 0x1F, the seed in decimal ("greedy" at temperature 0), 0x1F and
/// k in decimal.
std::string_view mock_stream_token(std::string_view prompt,
                                   std::optional<std::uint64_t> seed,
                                   std::uint64_t k);

/// Deterministic hash-based model. Logprobs come from hash_mock_logprob;
/// generation emits mock_stream_token(...) joined by single spaces.
class MockBackend final : public Backend {
 public:
  explicit MockBackend(std::string model_name = "mock",
                       std::uint32_t max_concurrency = 1)
      : model_name_(std::move(model_name)), max_concurrency_(max_concurrency) {}

  std::string model_name() const override { return model_name_; }
  std::uint32_t max_concurrency() const override { return max_concurrency_; }
  ScoreResponse score(std::string_view prompt,
                      std::span<const std::string> continuations) override;
  GenerateResponse generate(std::string_view prompt,
                            const GenParams& params) override;
  Vocabulary vocabulary() override;

 private:
  std::string model_name_;
  std::uint32_t max_concurrency_;
};

// ---------------------------------------------------------------------------
// Decorators.

/// Memoizes scoring by (model_name, prompt, continuation) and greedy
/// generation by (model_name, prompt, max_tokens, stop). Sampled generations
/// always reach the inner backend. With a path, entries are loaded at
/// construction and appended to the file as they are produced.
class CachingBackend final : public Backend {
 public:
  explicit CachingBackend(std::shared_ptr<Backend> inner,
                          std::optional<std::filesystem::path> path = {});
  ~CachingBackend() override;

  std::string model_name() const override { return inner_->model_name(); }
  std::uint32_t max_concurrency() const override {
    return inner_->max_concurrency();
  }
  ScoreResponse score(std::string_view prompt,
                      std::span<const std::string> continuations) override;
  GenerateResponse generate(std::string_view prompt,
                            const GenParams& params) override;
  Vocabulary vocabulary() override { return inner_->vocabulary(); }

  std::size_t hits() const;
  std::size_t misses() const;

 private:
  struct State;
  std::shared_ptr<Backend> inner_;
  std::unique_ptr<State> state_;
};

/// Blocks callers so that at most `limit` calls run inside `inner`.
class ConcurrencyLimitedBackend final : public Backend {
 public:
  ConcurrencyLimitedBackend(std::shared_ptr<Backend> inner,
                            std::uint32_t limit);

  std::string model_name() const override { return inner_->model_name(); }
  std::uint32_t max_concurrency() const override { return limit_; }
  ScoreResponse score(std::string_view prompt,
                      std::span<const std::string> continuations) override;
  GenerateResponse generate(std::string_view prompt,
                            const GenParams& params) override;
  Vocabulary vocabulary() override;

 private:
  class Permit;
  std::shared_ptr<Backend> inner_;
  std::uint32_t limit_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::uint32_t in_flight_ = 0;
};

/// Mock or HTTP backend per `spec`, wrapped with caching and the
/// concurrency limit.
std::shared_ptr<Backend> make_backend(const BackendSpec& spec);

}  // namespace seprand

#endif  // SEPRAND_BACKEND_HPP_

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

#include <array>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "seprand/error.hpp"
#include "seprand/http_backend.hpp"
#include "seprand/rng.hpp"
#include "seprand/text.hpp"

namespace seprand {

std::vector<std::string> validate_gen_params(const GenParams& params) {
  std::vector<std::string> out;
  if (params.max_tokens == 0 || params.max_tokens > kMaxGenerationTokens) {
    out.push_back(fmt::format("max_tokens: must be in 1..{} (got {})",
                              kMaxGenerationTokens, params.max_tokens));
  }
  if (!(params.temperature >= 0) || !std::isfinite(params.temperature)) {
    out.emplace_back("temperature: must be finite and >= 0");
  }
  for (const auto& s : params.stop) {
    if (s.empty()) out.emplace_back("stop: entries must be non-empty");
  }
  return out;
}

void validate_score_response(const ScoreResponse& response,
                             std::size_t n_continuations) {
  if (response.logprobs.size() != n_continuations) {
    throw Error(ErrorCode::kProtocol,
                fmt::format("logprobs: expected {} entries, got {}",
                            n_continuations, response.logprobs.size()));
  }
  if (response.tokens_evaluated.size() != n_continuations) {
    throw Error(ErrorCode::kProtocol,
                fmt::format("tokens_evaluated: expected {} entries, got {}",
                            n_continuations, response.tokens_evaluated.size()));
  }
  for (std::size_t i = 0; i < n_continuations; ++i) {
    const double lp = response.logprobs[i];
    if (!std::isfinite(lp) || lp > 0) {
      throw Error(ErrorCode::kProtocol,
                  fmt::format("logprobs[{}]: {} is not a finite value <= 0", i,
                              lp));
    }
    if (response.tokens_evaluated[i] < 1) {
      throw Error(ErrorCode::kProtocol,
                  fmt::format("tokens_evaluated[{}]: must be positive", i));
    }
  }
}

ScoreResponse score_checked(Backend& backend, std::string_view prompt,
                            std::span<const std::string> continuations) {
  if (prompt.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "score: prompt must be non-empty");
  }
  if (continuations.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "score: continuations must be non-empty");
  }
  auto response = backend.score(prompt, continuations);
  validate_score_response(response, continuations.size());
  return response;
}

std::vector<double> score_continuations(
    Backend& backend, std::string_view prompt,
    std::span<const std::string> continuations) {
  return score_checked(backend, prompt, continuations).logprobs;
}

std::string generate_text(Backend& backend, std::string_view prompt,
                          const GenParams& params) {
  const auto violations = validate_gen_params(params);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("generate: {}", fmt::join(violations, "; ")));
  }
  auto text = backend.generate(prompt, params).text;
  truncate_at_stop(text, params.stop);
  return text;
}

// ---------------------------------------------------------------------------
// Mock.

namespace {

constexpr std::array<std::string_view, 32> kMockWords = {
    "the",  "market", "said",  "on",   "Answer:", "positive", "negative",
    "In",   "December,", "I",  "text", "score",   "new",      "report",
    "Home", "Business", "of",  "a",    "to",      "and",      "Wall",
    "Street", "think", "step", "by",   "LONDON",  "Image",    "song",
    "game", "\n",     "!",     ":"};

int count_words(std::string_view text) {
  int n = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r';
    if (!space && !in_word) ++n;
    in_word = !space;
  }
  return std::max(n, 1);
}

}  // namespace

namespace {

// FNV-1a alone leaves the low bits nearly constant across inputs that
// differ only in a trailing digit; one splitmix64 step spreads them.
std::uint64_t mix(std::uint64_t h) { return SplitMix64(h).next(); }

}  // namespace

double hash_mock_logprob(std::string_view prompt,
                         std::string_view continuation) {
  const std::uint64_t h =
      Fnv1a64().update(prompt).update_byte(0x1F).update(continuation).digest();
  return -10.0 * (static_cast<double>(h) / 18446744073709551616.0);
}

std::span<const std::string_view> mock_words() { return kMockWords; }

std::string_view mock_stream_token(std::string_view prompt,
                                   std::optional<std::uint64_t> seed,
                                   std::uint64_t k) {
  const std::string seed_part =
      seed ? std::to_string(*seed) : std::string("greedy");
  const std::uint64_t h = mix(Fnv1a64()
                                  .update(prompt)
                                  .update_byte(0x1F)
                                  .update(seed_part)
                                  .update_byte(0x1F)
                                  .update(std::to_string(k))
                                  .digest());
  return kMockWords[h % kMockWords.size()];
}

ScoreResponse MockBackend::score(std::string_view prompt,
                                 std::span<const std::string> continuations) {
  ScoreResponse out;
  out.logprobs.reserve(continuations.size());
  out.tokens_evaluated.reserve(continuations.size());
  for (const auto& c : continuations) {
    out.logprobs.push_back(hash_mock_logprob(prompt, c));
    out.tokens_evaluated.push_back(count_words(c));
  }
  return out;
}

GenerateResponse MockBackend::generate(std::string_view prompt,
                                       const GenParams& params) {
  std::optional<std::uint64_t> seed;
  if (params.temperature > 0) seed = params.seed.value_or(0);
  GenerateResponse out;
  for (std::uint32_t k = 0; k < params.max_tokens; ++k) {
    if (k > 0) out.text.push_back(' ');
    out.text.append(mock_stream_token(prompt, seed, k));
  }
  out.finish_reason = truncate_at_stop(out.text, params.stop) ? "stop" : "length";
  return out;
}

Vocabulary MockBackend::vocabulary() {
  Vocabulary vocab;
  vocab.tokens.emplace_back("<|endoftext|>");
  vocab.special.insert(0);
  for (auto word : kMockWords) {
    if (word == "\n") continue;
    vocab.tokens.emplace_back(word);
    vocab.tokens.push_back("\xC4\xA0" + std::string(word));
  }
  return vocab;
}

// ---------------------------------------------------------------------------
// Concurrency limit.

class ConcurrencyLimitedBackend::Permit {
 public:
  explicit Permit(ConcurrencyLimitedBackend& owner) : owner_(owner) {
    std::unique_lock lock(owner_.mu_);
    owner_.cv_.wait(lock, [&] { return owner_.in_flight_ < owner_.limit_; });
    ++owner_.in_flight_;
  }
  ~Permit() {
    {
      std::lock_guard lock(owner_.mu_);
      --owner_.in_flight_;
    }
    owner_.cv_.notify_one();
  }
  Permit(const Permit&) = delete;
  Permit& operator=(const Permit&) = delete;

 private:
  ConcurrencyLimitedBackend& owner_;
};

ConcurrencyLimitedBackend::ConcurrencyLimitedBackend(
    std::shared_ptr<Backend> inner, std::uint32_t limit)
    : inner_(std::move(inner)), limit_(limit) {
  if (limit_ == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_concurrency must be >= 1");
  }
}

ScoreResponse ConcurrencyLimitedBackend::score(
    std::string_view prompt, std::span<const std::string> continuations) {
  Permit permit(*this);
  return inner_->score(prompt, continuations);
}

GenerateResponse ConcurrencyLimitedBackend::generate(std::string_view prompt,
                                                     const GenParams& params) {
  Permit permit(*this);
  return inner_->generate(prompt, params);
}

Vocabulary ConcurrencyLimitedBackend::vocabulary() {
  Permit permit(*this);
  return inner_->vocabulary();
}

std::shared_ptr<Backend> make_backend(const BackendSpec& spec) {
  if (spec.max_concurrency == 0) {
    throw Error(ErrorCode::kInvalidArgument, "max_concurrency must be >= 1");
  }
  std::shared_ptr<Backend> base;
  if (spec.is_mock()) {
    base = std::make_shared<MockBackend>(spec.model_name, spec.max_concurrency);
  } else {
    HttpBackendOptions options;
    options.endpoint = spec.endpoint;
    options.model_name = spec.model_name;
    options.request_timeout = spec.request_timeout;
    options.max_concurrency = spec.max_concurrency;
    options.api_token = spec.api_token;
    base = std::make_shared<HttpBackend>(std::move(options));
  }
  auto limited =
      std::make_shared<ConcurrencyLimitedBackend>(base, spec.max_concurrency);
  return std::make_shared<CachingBackend>(limited, spec.cache_path);
}

}  // namespace seprand

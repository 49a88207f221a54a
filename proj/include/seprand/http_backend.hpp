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
/// Client for the JSON wire protocol served by the inference sidecar:
///
///   POST /v1/score     {"prompt", "continuations"} -> {"logprobs", "tokens_evaluated"}
///   POST /v1/generate  {"prompt", "max_tokens", "temperature", "stop", "seed"?}
///                      -> {"text", "finish_reason"}
///   GET  /v1/vocab     -> {"tokens", "special_indices"}
///   GET  /v1/health    -> {"model", "status"}

#ifndef SEPRAND_HTTP_BACKEND_HPP_
#define SEPRAND_HTTP_BACKEND_HPP_

#include <chrono>
#include <functional>
#include <optional>
#include <string>

#include "seprand/backend.hpp"
#include "seprand/serialize.hpp"

namespace seprand {

struct HttpBackendOptions {
  /// e.g. "http://127.0.0.1:8765" or "http://host:port/prefix".
  std::string endpoint;
  /// Empty: ask /v1/health on first use.
  std::string model_name;
  std::chrono::milliseconds request_timeout{30000};
  std::uint32_t max_concurrency = 1;
  std::optional<std::string> api_token;
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  /// Replaced in tests to avoid real sleeping.
  std::function<void(std::chrono::milliseconds)> sleep;
};

// Wire bodies, exposed for conformance tests.
Json score_request_json(std::string_view prompt,
                        std::span<const std::string> continuations);
ScoreResponse parse_score_response(const Json& body);
Json generate_request_json(std::string_view prompt, const GenParams& params);
GenerateResponse parse_generate_response(const Json& body);
Vocabulary parse_vocab_response(const Json& body);

/// Transport failures (no response, 5xx, 429) are retried with exponential
/// backoff and end in kBackendUnavailable; any other non-2xx status or a
/// malformed body is kProtocol and never retried.
class HttpBackend final : public Backend {
 public:
  explicit HttpBackend(HttpBackendOptions options);
  ~HttpBackend() override;

  std::string model_name() const override;
  std::uint32_t max_concurrency() const override {
    return options_.max_concurrency;
  }
  ScoreResponse score(std::string_view prompt,
                      std::span<const std::string> continuations) override;
  GenerateResponse generate(std::string_view prompt,
                            const GenParams& params) override;
  Vocabulary vocabulary() override;

  /// GET /v1/health; returns the reported model name.
  std::string health() const;

 private:
  Json get(const std::string& path) const;
  Json post(const std::string& path, const Json& body) const;
  template <typename Call>
  Json with_retries(const std::string& path, Call&& call) const;

  HttpBackendOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  mutable std::mutex model_mu_;
  mutable std::string resolved_model_;
};

}  // namespace seprand

#endif  // SEPRAND_HTTP_BACKEND_HPP_

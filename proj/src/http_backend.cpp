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

#include "seprand/http_backend.hpp"

#include <thread>

#include <fmt/format.h>
#include <httplib.h>

#include "seprand/error.hpp"

namespace seprand {
namespace {

const Json& protocol_field(const Json& body, const char* key) {
  if (!body.is_object() || !body.contains(key)) {
    throw Error(ErrorCode::kProtocol, fmt::format("{}: missing", key));
  }
  return body.at(key);
}

std::string protocol_string(const Json& body, const char* key) {
  const auto& v = protocol_field(body, key);
  if (!v.is_string()) {
    throw Error(ErrorCode::kProtocol, fmt::format("{}: expected a string", key));
  }
  return v.get<std::string>();
}

bool is_transport_status(int status) { return status == 429 || status >= 500; }

}  // namespace

Json score_request_json(std::string_view prompt,
                        std::span<const std::string> continuations) {
  return Json{{"prompt", prompt},
              {"continuations",
               std::vector<std::string>(continuations.begin(),
                                        continuations.end())}};
}

ScoreResponse parse_score_response(const Json& body) {
  ScoreResponse out;
  const auto& logprobs = protocol_field(body, "logprobs");
  const auto& tokens = protocol_field(body, "tokens_evaluated");
  if (!logprobs.is_array()) {
    throw Error(ErrorCode::kProtocol, "logprobs: expected an array");
  }
  if (!tokens.is_array()) {
    throw Error(ErrorCode::kProtocol, "tokens_evaluated: expected an array");
  }
  for (std::size_t i = 0; i < logprobs.size(); ++i) {
    if (!logprobs[i].is_number()) {
      throw Error(ErrorCode::kProtocol,
                  fmt::format("logprobs[{}]: expected a number", i));
    }
    out.logprobs.push_back(logprobs[i].get<double>());
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_number_integer()) {
      throw Error(ErrorCode::kProtocol,
                  fmt::format("tokens_evaluated[{}]: expected an integer", i));
    }
    out.tokens_evaluated.push_back(tokens[i].get<int>());
  }
  return out;
}

Json generate_request_json(std::string_view prompt, const GenParams& params) {
  Json j{{"prompt", prompt},
         {"max_tokens", params.max_tokens},
         {"temperature", params.temperature},
         {"stop", params.stop}};
  if (params.seed) j["seed"] = *params.seed;
  return j;
}

GenerateResponse parse_generate_response(const Json& body) {
  GenerateResponse out;
  out.text = protocol_string(body, "text");
  out.finish_reason = protocol_string(body, "finish_reason");
  if (out.finish_reason != "stop" && out.finish_reason != "length") {
    throw Error(ErrorCode::kProtocol,
                fmt::format("finish_reason: unexpected value '{}'",
                            out.finish_reason));
  }
  return out;
}

Vocabulary parse_vocab_response(const Json& body) {
  Vocabulary vocab;
  const auto& tokens = protocol_field(body, "tokens");
  if (!tokens.is_array()) {
    throw Error(ErrorCode::kProtocol, "tokens: expected an array");
  }
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!tokens[i].is_string()) {
      throw Error(ErrorCode::kProtocol,
                  fmt::format("tokens[{}]: expected a string", i));
    }
    vocab.tokens.push_back(tokens[i].get<std::string>());
  }
  if (body.contains("special_indices")) {
    const auto& special = body.at("special_indices");
    if (!special.is_array()) {
      throw Error(ErrorCode::kProtocol, "special_indices: expected an array");
    }
    for (std::size_t i = 0; i < special.size(); ++i) {
      if (!special[i].is_number_unsigned() ||
          special[i].get<std::size_t>() >= vocab.tokens.size()) {
        throw Error(ErrorCode::kProtocol,
                    fmt::format("special_indices[{}]: not a valid token index",
                                i));
      }
      vocab.special.insert(special[i].get<std::size_t>());
    }
  }
  if (vocab.tokens.empty()) {
    throw Error(ErrorCode::kInvalidVocabulary, "backend vocabulary is empty");
  }
  return vocab;
}

HttpBackend::HttpBackend(HttpBackendOptions options)
    : options_(std::move(options)) {
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) {
      std::this_thread::sleep_for(d);
    };
  }
  if (options_.max_attempts < 1) options_.max_attempts = 1;
  const auto& url = options_.endpoint;
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("backend endpoint '{}' is not a URL", url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  if (path_start != std::string::npos) {
    path_prefix_ = url.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
  resolved_model_ = options_.model_name;
}

HttpBackend::~HttpBackend() = default;

template <typename Call>
Json HttpBackend::with_retries(const std::string& path, Call&& call) const {
  auto backoff = options_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= options_.max_attempts; ++attempt) {
    httplib::Client client(scheme_host_port_);
    const auto timeout = options_.request_timeout;
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (options_.api_token && !options_.api_token->empty()) {
      headers.emplace("Authorization", "Bearer " + *options_.api_token);
    }
    httplib::Result result = call(client, path_prefix_ + path, headers);
    if (!result) {
      last_error = httplib::to_string(result.error());
    } else if (is_transport_status(result->status)) {
      last_error = fmt::format("HTTP {}", result->status);
    } else if (result->status < 200 || result->status >= 300) {
      throw Error(ErrorCode::kProtocol,
                  fmt::format("{}: HTTP {}: {}", path, result->status,
                              result->body));
    } else {
      try {
        return Json::parse(result->body);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::kProtocol,
                    fmt::format("{}: body is not JSON: {}", path, e.what()));
      }
    }
    if (attempt < options_.max_attempts) {
      options_.sleep(backoff);
      backoff *= 2;
    }
  }
  throw Error(ErrorCode::kBackendUnavailable,
              fmt::format("{}{}: {} after {} attempts", scheme_host_port_, path,
                          last_error, options_.max_attempts));
}

Json HttpBackend::get(const std::string& path) const {
  return with_retries(path, [](httplib::Client& c, const std::string& p,
                               const httplib::Headers& h) {
    return c.Get(p, h);
  });
}

Json HttpBackend::post(const std::string& path, const Json& body) const {
  const auto payload = body.dump();
  return with_retries(path, [&payload](httplib::Client& c, const std::string& p,
                                       const httplib::Headers& h) {
    return c.Post(p, h, payload, "application/json");
  });
}

std::string HttpBackend::health() const {
  const auto body = get("/v1/health");
  const auto status = protocol_string(body, "status");
  if (status != "ok") {
    throw Error(ErrorCode::kBackendUnavailable,
                fmt::format("backend reports status '{}'", status));
  }
  return protocol_string(body, "model");
}

std::string HttpBackend::model_name() const {
  std::lock_guard lock(model_mu_);
  if (resolved_model_.empty()) resolved_model_ = health();
  return resolved_model_;
}

ScoreResponse HttpBackend::score(std::string_view prompt,
                                 std::span<const std::string> continuations) {
  auto response = parse_score_response(
      post("/v1/score", score_request_json(prompt, continuations)));
  validate_score_response(response, continuations.size());
  return response;
}

GenerateResponse HttpBackend::generate(std::string_view prompt,
                                       const GenParams& params) {
  return parse_generate_response(
      post("/v1/generate", generate_request_json(prompt, params)));
}

Vocabulary HttpBackend::vocabulary() {
  return parse_vocab_response(get("/v1/vocab"));
}

}  // namespace seprand

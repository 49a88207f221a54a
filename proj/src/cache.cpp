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

#include <fstream>
#include <map>
#include <optional>
#include <tuple>

#include <fmt/format.h>

#include "seprand/backend.hpp"
#include "seprand/error.hpp"
#include "seprand/serialize.hpp"

namespace seprand {
namespace {

using ScoreKey = std::tuple<std::string, std::string, std::string>;
using GenKey = std::tuple<std::string, std::string, std::uint32_t,
                          std::vector<std::string>>;

struct ScoreValue {
  double logprob = 0;
  int tokens = 1;
};

}  // namespace

struct CachingBackend::State {
  mutable std::mutex mu;
  std::map<ScoreKey, ScoreValue> scores;
  std::map<GenKey, GenerateResponse> generations;
  std::ofstream file;
  std::size_t hits = 0;
  std::size_t misses = 0;

  void append(const Json& line) {
    if (!file.is_open()) return;
    file << dump_line(line) << '\n';
    file.flush();
  }

  /// Returns the byte offset of a torn final line, if there is one.
  std::optional<std::uintmax_t> load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::string line;
    std::size_t line_no = 0;
    std::streamoff offset = 0;
    while (std::getline(in, line)) {
      ++line_no;
      const auto line_start = offset;
      offset += static_cast<std::streamoff>(line.size()) + 1;
      if (line.empty()) continue;
      Json j;
      try {
        j = Json::parse(line);
      } catch (const nlohmann::json::parse_error&) {
        // A torn final line from an interrupted writer is dropped.
        if (in.peek() == std::char_traits<char>::eof()) {
          return static_cast<std::uintmax_t>(line_start);
        }
        throw Error(ErrorCode::kParse,
                    fmt::format("{}:{}: malformed cache entry", path.string(),
                                line_no));
      }
      try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "score") {
          scores[{j.at("model").get<std::string>(),
                  j.at("prompt").get<std::string>(),
                  j.at("continuation").get<std::string>()}] =
              ScoreValue{j.at("logprob").get<double>(),
                         j.at("tokens").get<int>()};
        } else if (kind == "generate") {
          generations[{j.at("model").get<std::string>(),
                       j.at("prompt").get<std::string>(),
                       j.at("max_tokens").get<std::uint32_t>(),
                       j.at("stop").get<std::vector<std::string>>()}] =
              GenerateResponse{j.at("text").get<std::string>(),
                               j.at("finish_reason").get<std::string>()};
        }
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::kParse,
                    fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
      }
    }
    return std::nullopt;
  }
};

CachingBackend::CachingBackend(std::shared_ptr<Backend> inner,
                               std::optional<std::filesystem::path> path)
    : inner_(std::move(inner)), state_(std::make_unique<State>()) {
  if (path) {
    if (const auto torn = state_->load(*path)) {
      std::filesystem::resize_file(*path, *torn);
    }
    state_->file.open(*path, std::ios::app);
    if (!state_->file) {
      throw Error(ErrorCode::kIo, fmt::format("cannot open cache file {}",
                                              path->string()));
    }
    // Start on a fresh line if the last entry lacks its newline.
    std::ifstream tail(*path, std::ios::binary | std::ios::ate);
    if (tail && tail.tellg() > 0) {
      tail.seekg(-1, std::ios::end);
      if (tail.get() != '\n') state_->file << '\n';
    }
  }
}

CachingBackend::~CachingBackend() = default;

ScoreResponse CachingBackend::score(std::string_view prompt,
                                    std::span<const std::string> continuations) {
  const auto model = inner_->model_name();
  ScoreResponse out;
  out.logprobs.resize(continuations.size());
  out.tokens_evaluated.resize(continuations.size());
  std::vector<std::size_t> missing;
  {
    std::lock_guard lock(state_->mu);
    for (std::size_t i = 0; i < continuations.size(); ++i) {
      auto it = state_->scores.find(
          {model, std::string(prompt), continuations[i]});
      if (it == state_->scores.end()) {
        missing.push_back(i);
        ++state_->misses;
      } else {
        out.logprobs[i] = it->second.logprob;
        out.tokens_evaluated[i] = it->second.tokens;
        ++state_->hits;
      }
    }
  }
  if (missing.empty()) return out;

  std::vector<std::string> request;
  request.reserve(missing.size());
  for (auto i : missing) request.push_back(continuations[i]);
  auto fresh = inner_->score(prompt, request);
  // Never cache a malformed answer.
  validate_score_response(fresh, request.size());

  std::lock_guard lock(state_->mu);
  for (std::size_t k = 0; k < missing.size(); ++k) {
    const auto i = missing[k];
    out.logprobs[i] = fresh.logprobs[k];
    out.tokens_evaluated[i] = fresh.tokens_evaluated[k];
    auto [it, inserted] = state_->scores.emplace(
        ScoreKey{model, std::string(prompt), request[k]},
        ScoreValue{fresh.logprobs[k], fresh.tokens_evaluated[k]});
    if (inserted) {
      state_->append(Json{{"kind", "score"},
                          {"model", model},
                          {"prompt", prompt},
                          {"continuation", request[k]},
                          {"logprob", fresh.logprobs[k]},
                          {"tokens", fresh.tokens_evaluated[k]}});
    }
  }
  return out;
}

GenerateResponse CachingBackend::generate(std::string_view prompt,
                                          const GenParams& params) {
  if (params.temperature != 0) return inner_->generate(prompt, params);
  GenKey key{inner_->model_name(), std::string(prompt), params.max_tokens,
             params.stop};
  {
    std::lock_guard lock(state_->mu);
    if (auto it = state_->generations.find(key);
        it != state_->generations.end()) {
      ++state_->hits;
      return it->second;
    }
    ++state_->misses;
  }
  auto fresh = inner_->generate(prompt, params);
  std::lock_guard lock(state_->mu);
  if (state_->generations.emplace(key, fresh).second) {
    state_->append(Json{{"kind", "generate"},
                        {"model", std::get<0>(key)},
                        {"prompt", prompt},
                        {"max_tokens", params.max_tokens},
                        {"stop", params.stop},
                        {"text", fresh.text},
                        {"finish_reason", fresh.finish_reason}});
  }
  return fresh;
}

std::size_t CachingBackend::hits() const {
  std::lock_guard lock(state_->mu);
  return state_->hits;
}

std::size_t CachingBackend::misses() const {
  std::lock_guard lock(state_->mu);
  return state_->misses;
}

}  // namespace seprand

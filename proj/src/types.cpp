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

#include "seprand/types.hpp"

#include <cmath>

#include <fmt/format.h>

#include "seprand/error.hpp"

namespace seprand {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidVocabulary: return "invalid-vocabulary";
    case ErrorCode::kInsufficientContext: return "insufficient-context";
    case ErrorCode::kInsufficientData: return "insufficient-data";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kDegenerateGeneration: return "degenerate-generation";
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kBackendUnavailable: return "backend-unavailable";
    case ErrorCode::kProtocol: return "protocol-error";
    case ErrorCode::kEmptySearch: return "empty-search";
    case ErrorCode::kIncompatibleRecords: return "incompatible-records";
    case ErrorCode::kDomain: return "domain-error";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

std::string_view to_string(TaskKind kind) {
  return kind == TaskKind::kClassification ? "classification" : "generative";
}

std::string_view to_string(Split split) {
  return split == Split::kTrain ? "train" : "test";
}

std::string_view to_string(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRandomVocabulary: return "random_vocabulary";
    case Strategy::kRandomNoContext: return "random_no_context";
    case Strategy::kRandomWithContext: return "random_with_context";
    case Strategy::kOpro: return "opro";
    case Strategy::kOproIcl: return "opro_icl";
    case Strategy::kFixed: return "fixed";
  }
  return "fixed";
}

std::string_view short_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::kRandomVocabulary: return "vocab";
    case Strategy::kRandomNoContext: return "prior";
    case Strategy::kRandomWithContext: return "context";
    case Strategy::kOpro: return "opro";
    case Strategy::kOproIcl: return "opro-icl";
    case Strategy::kFixed: return "fixed";
  }
  return "fixed";
}

TaskKind parse_task_kind(std::string_view text) {
  if (text == "classification") return TaskKind::kClassification;
  if (text == "generative") return TaskKind::kGenerative;
  throw Error(ErrorCode::kParse, fmt::format("unknown task kind '{}'", text));
}

Split parse_split(std::string_view text) {
  if (text == "train") return Split::kTrain;
  if (text == "test") return Split::kTest;
  throw Error(ErrorCode::kParse, fmt::format("unknown split '{}'", text));
}

Strategy parse_strategy(std::string_view text) {
  for (auto s : {Strategy::kRandomVocabulary, Strategy::kRandomNoContext,
                 Strategy::kRandomWithContext, Strategy::kOpro,
                 Strategy::kOproIcl, Strategy::kFixed}) {
    if (text == to_string(s) || text == short_name(s)) return s;
  }
  throw Error(ErrorCode::kParse, fmt::format("unknown strategy '{}'", text));
}

const std::string& TaskSpec::verbalize(const Example& example) const {
  if (!example.has_label()) return example.answer();
  const int id = example.label();
  for (const auto& label : labels) {
    if (label.id == id) return label.verbalization;
  }
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("task '{}' has no label_id {}", name, id));
}

Separator fixed_separator(std::string_view text) {
  return Separator{std::string(text), Strategy::kFixed, 0, 0};
}

bool is_baseline_text(std::string_view text) {
  return text == kAnswerBaseline || text == kFooBarBaseline ||
         text == kZeroShotCotBaseline;
}

int ScoreRecord::percent_score() const {
  if (n_evaluated == 0) return 0;
  const std::uint64_t n = n_evaluated;
  return static_cast<int>((200 * static_cast<std::uint64_t>(n_correct) + n) /
                          (2 * n));
}

std::vector<std::string> validate_config(const SearchConfig& config) {
  std::vector<std::string> out;
  if (config.budget == 0) out.emplace_back("budget: must be positive");
  if (config.n_train == 0) out.emplace_back("n_train: must be positive");
  if (!(config.gen_temperature >= 0) || !std::isfinite(config.gen_temperature))
    out.emplace_back("gen_temperature: must be finite and >= 0");
  if (!(config.eval_temperature >= 0) ||
      !std::isfinite(config.eval_temperature))
    out.emplace_back("eval_temperature: must be finite and >= 0");
  if (config.max_separator_tokens == 0)
    out.emplace_back("max_separator_tokens: must be positive");
  if (config.max_separator_chars == 0)
    out.emplace_back("max_separator_chars: must be positive");
  if (config.strategy == Strategy::kFixed)
    out.emplace_back("strategy: fixed separators are not searched");
  if (is_opro_strategy(config.strategy)) {
    if (config.opro_per_step == 0)
      out.emplace_back("opro_per_step: must be positive");
    if (config.opro_steps == 0) out.emplace_back("opro_steps: must be positive");
    if (static_cast<std::uint64_t>(config.opro_steps) * config.opro_per_step !=
        config.budget) {
      out.push_back(fmt::format(
          "budget: opro_steps x opro_per_step ({} x {}) must equal budget {}",
          config.opro_steps, config.opro_per_step, config.budget));
    }
    if (config.opro_history_cap == 0)
      out.emplace_back("opro_history_cap: must be positive");
    if (config.opro_start.empty())
      out.emplace_back("opro_start: must be non-empty");
  }
  return out;
}

std::vector<std::size_t> Vocabulary::usable_indices() const {
  std::vector<std::size_t> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!special.contains(i)) out.push_back(i);
  }
  return out;
}

}  // namespace seprand

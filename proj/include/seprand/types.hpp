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
/// Domain types shared by every seprand module. All of them are plain values;
/// once built they are never mutated, so they can be shared across threads.

#ifndef SEPRAND_TYPES_HPP_
#define SEPRAND_TYPES_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace seprand {

enum class TaskKind { kClassification, kGenerative };
enum class Split { kTrain, kTest };

/// How a separator came to be. kFixed is reserved for the baselines.
enum class Strategy {
  kRandomVocabulary,
  kRandomNoContext,
  kRandomWithContext,
  kOpro,
  kOproIcl,
  kFixed,
};

std::string_view to_string(TaskKind kind);
std::string_view to_string(Split split);
std::string_view to_string(Strategy strategy);

TaskKind parse_task_kind(std::string_view text);
Split parse_split(std::string_view text);
/// Accepts both canonical names ("random_vocabulary") and CLI short names
/// ("vocab", "prior", "context", "opro", "opro-icl").
Strategy parse_strategy(std::string_view text);
/// CLI short name for a strategy ("vocab", "prior", ...).
std::string_view short_name(Strategy strategy);

inline bool is_random_strategy(Strategy s) {
  return s == Strategy::kRandomVocabulary || s == Strategy::kRandomNoContext ||
         s == Strategy::kRandomWithContext;
}
inline bool is_opro_strategy(Strategy s) {
  return s == Strategy::kOpro || s == Strategy::kOproIcl;
}

/// Gold target of an example: a label id for classification, an answer
/// string for generative tasks.
using Target = std::variant<int, std::string>;

struct Example {
  std::string text;
  Target target;

  bool has_label() const { return std::holds_alternative<int>(target); }
  int label() const { return std::get<int>(target); }
  const std::string& answer() const { return std::get<std::string>(target); }

  friend bool operator==(const Example&, const Example&) = default;
};

struct Label {
  int id = 0;
  std::string verbalization;

  friend bool operator==(const Label&, const Label&) = default;
};

/// Layout of demonstrations and the query. Placeholders are {input},
/// {separator} and {output}.
struct PromptTemplate {
  std::string example_format = "{input} {separator} {output}";
  std::string example_joiner = "\n";
  std::string query_format = "{input} {separator}";
  std::string continuation_prefix = " ";

  friend bool operator==(const PromptTemplate&, const PromptTemplate&) =
      default;
};

struct TaskSpec {
  std::string name;
  TaskKind kind = TaskKind::kClassification;
  std::vector<Label> labels;
  std::vector<Example> train;
  std::vector<Example> test;
  PromptTemplate prompt_template;
  int context_shots = 1;

  /// Text of the gold output: the verbalized label, or the answer.
  const std::string& verbalize(const Example& example) const;
  const std::vector<Example>& split(Split which) const {
    return which == Split::kTrain ? train : test;
  }

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

struct Separator {
  std::string text;
  Strategy strategy = Strategy::kFixed;
  std::uint64_t iteration = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const Separator&, const Separator&) = default;
};

/// The three baseline separators.
inline constexpr std::string_view kAnswerBaseline = "Answer:";
inline constexpr std::string_view kFooBarBaseline = "Foo Bar";
inline constexpr std::string_view kZeroShotCotBaseline =
    "Let's think step by step";

Separator fixed_separator(std::string_view text);
bool is_baseline_text(std::string_view text);

struct Prediction {
  std::size_t index = 0;
  Target value;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Accuracy of one separator on one split. Accuracy is kept as the exact
/// count pair so that accuracy * n_evaluated is always an integer.
struct ScoreRecord {
  Separator separator;
  Split split = Split::kTrain;
  std::uint32_t n_correct = 0;
  std::uint32_t n_evaluated = 0;
  std::optional<std::vector<Prediction>> predictions;

  double accuracy() const {
    return n_evaluated == 0 ? 0.0
                            : static_cast<double>(n_correct) / n_evaluated;
  }
  /// Accuracy x 100 rounded half-up to an integer (0..100).
  int percent_score() const;

  friend bool operator==(const ScoreRecord&, const ScoreRecord&) = default;
};

/// Strict ordering on accuracy without going through floating point.
inline bool accuracy_less(const ScoreRecord& a, const ScoreRecord& b) {
  return static_cast<std::uint64_t>(a.n_correct) * b.n_evaluated <
         static_cast<std::uint64_t>(b.n_correct) * a.n_evaluated;
}
inline bool accuracy_equal(const ScoreRecord& a, const ScoreRecord& b) {
  return static_cast<std::uint64_t>(a.n_correct) * b.n_evaluated ==
         static_cast<std::uint64_t>(b.n_correct) * a.n_evaluated;
}

struct SearchConfig {
  std::uint32_t budget = 160;
  Strategy strategy = Strategy::kRandomVocabulary;
  std::uint64_t seed = 0;
  std::uint32_t n_train = 64;
  double gen_temperature = 1.0;
  double eval_temperature = 0.0;
  std::uint32_t max_separator_tokens = 8;
  std::uint32_t max_separator_chars = 64;
  std::uint32_t opro_steps = 40;
  std::uint32_t opro_per_step = 4;
  std::uint32_t opro_history_cap = 20;
  std::string opro_start = std::string(kAnswerBaseline);
  bool length_normalize = false;

  friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

/// Rule violations; empty when the config is usable.
std::vector<std::string> validate_config(const SearchConfig& config);

struct CurvePoint {
  std::uint64_t iteration = 0;
  double best_accuracy = 0.0;

  friend bool operator==(const CurvePoint&, const CurvePoint&) = default;
};

struct SearchResult {
  std::vector<ScoreRecord> records;
  ScoreRecord best;
  std::vector<CurvePoint> curve;
  std::string config_digest;
  bool complete = true;
};

struct BackendSpec {
  std::string endpoint = "mock";
  std::string model_name = "mock";
  std::chrono::milliseconds request_timeout{30000};
  std::uint32_t max_concurrency = 1;
  std::optional<std::filesystem::path> cache_path;
  std::optional<std::string> api_token;

  bool is_mock() const { return endpoint == "mock"; }
};

struct Vocabulary {
  std::vector<std::string> tokens;
  std::set<std::size_t> special;

  /// Indices available to the random vocabulary sampler, ascending.
  std::vector<std::size_t> usable_indices() const;

  friend bool operator==(const Vocabulary&, const Vocabulary&) = default;
};

/// Demonstrations prepended to every query. `outputs` holds each
/// example's gold text; `rendered` is the template applied to the examples
/// with the {separator} placeholder left in place, since the separator
/// varies per evaluation.
struct ContextBlock {
  std::vector<Example> examples;
  std::vector<std::string> outputs;
  std::string rendered;

  friend bool operator==(const ContextBlock&, const ContextBlock&) = default;
};

}  // namespace seprand

#endif  // SEPRAND_TYPES_HPP_

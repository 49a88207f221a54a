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

#include "seprand/serialize.hpp"

#include <fmt/format.h>

#include "seprand/error.hpp"
#include "seprand/rng.hpp"

namespace seprand {
namespace {

template <typename T>
T required(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, fmt::format("missing field '{}'", key));
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse,
                fmt::format("field '{}' has the wrong type: {}", key, e.what()));
  }
}

template <typename T>
void optional_into(const Json& j, const char* key, T& out) {
  if (j.is_object() && j.contains(key) && !j.at(key).is_null()) {
    out = required<T>(j, key);
  }
}

Json target_to_json(const Target& t) {
  if (std::holds_alternative<int>(t)) return std::get<int>(t);
  return std::get<std::string>(t);
}

Target target_from_json(const Json& j) {
  if (j.is_number_integer()) return j.get<int>();
  if (j.is_string()) return j.get<std::string>();
  throw Error(ErrorCode::kParse, "target must be an integer or a string");
}

}  // namespace

void to_json(Json& j, const Example& v) {
  j = Json::object();
  j["text"] = v.text;
  if (v.has_label()) {
    j["label"] = v.label();
  } else {
    j["answer"] = v.answer();
  }
}

void from_json(const Json& j, Example& v) {
  v.text = required<std::string>(j, "text");
  if (j.contains("label")) {
    if (!j.at("label").is_number_integer()) {
      throw Error(ErrorCode::kParse, "field 'label' must be an integer");
    }
    v.target = j.at("label").get<int>();
  } else if (j.contains("answer")) {
    const auto& a = j.at("answer");
    // Numeric answers are accepted and kept in their JSON spelling.
    v.target = a.is_string() ? a.get<std::string>() : a.dump();
  } else {
    throw Error(ErrorCode::kParse, "example needs 'label' or 'answer'");
  }
}

void to_json(Json& j, const Label& v) {
  j = Json{{"id", v.id}, {"verbalization", v.verbalization}};
}

void from_json(const Json& j, Label& v) {
  v.id = required<int>(j, "id");
  v.verbalization = required<std::string>(j, "verbalization");
}

void to_json(Json& j, const PromptTemplate& v) {
  j = Json{{"example_format", v.example_format},
           {"example_joiner", v.example_joiner},
           {"query_format", v.query_format},
           {"continuation_prefix", v.continuation_prefix}};
}

void from_json(const Json& j, PromptTemplate& v) {
  optional_into(j, "example_format", v.example_format);
  optional_into(j, "example_joiner", v.example_joiner);
  optional_into(j, "query_format", v.query_format);
  optional_into(j, "continuation_prefix", v.continuation_prefix);
}

void to_json(Json& j, const Separator& v) {
  j = Json{{"text", v.text},
           {"strategy", to_string(v.strategy)},
           {"iteration", v.iteration},
           {"seed", v.seed}};
}

void from_json(const Json& j, Separator& v) {
  v.text = required<std::string>(j, "text");
  v.strategy = parse_strategy(required<std::string>(j, "strategy"));
  v.iteration = required<std::uint64_t>(j, "iteration");
  v.seed = required<std::uint64_t>(j, "seed");
}

void to_json(Json& j, const Prediction& v) {
  j = Json::array({v.index, target_to_json(v.value)});
}

void from_json(const Json& j, Prediction& v) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number_unsigned()) {
    throw Error(ErrorCode::kParse, "prediction must be [index, value]");
  }
  v.index = j[0].get<std::size_t>();
  v.value = target_from_json(j[1]);
}

void to_json(Json& j, const ScoreRecord& v) {
  j = Json{{"separator", v.separator},
           {"split", to_string(v.split)},
           {"accuracy", v.accuracy()},
           {"n_correct", v.n_correct},
           {"n_evaluated", v.n_evaluated}};
  if (v.predictions) j["predictions"] = *v.predictions;
}

void from_json(const Json& j, ScoreRecord& v) {
  v.separator = required<Separator>(j, "separator");
  v.split = parse_split(required<std::string>(j, "split"));
  v.n_correct = required<std::uint32_t>(j, "n_correct");
  v.n_evaluated = required<std::uint32_t>(j, "n_evaluated");
  if (v.n_evaluated == 0 || v.n_correct > v.n_evaluated) {
    throw Error(ErrorCode::kParse,
                fmt::format("record counts {}/{} are inconsistent",
                            v.n_correct, v.n_evaluated));
  }
  v.predictions.reset();
  if (j.contains("predictions")) {
    v.predictions = required<std::vector<Prediction>>(j, "predictions");
    if (v.predictions->size() != v.n_evaluated) {
      throw Error(ErrorCode::kParse,
                  "predictions length must equal n_evaluated");
    }
  }
}

void to_json(Json& j, const SearchConfig& v) {
  j = Json{{"budget", v.budget},
           {"strategy", to_string(v.strategy)},
           {"seed", v.seed},
           {"n_train", v.n_train},
           {"gen_temperature", v.gen_temperature},
           {"eval_temperature", v.eval_temperature},
           {"max_separator_tokens", v.max_separator_tokens},
           {"max_separator_chars", v.max_separator_chars},
           {"opro_steps", v.opro_steps},
           {"opro_per_step", v.opro_per_step},
           {"opro_history_cap", v.opro_history_cap},
           {"opro_start", v.opro_start},
           {"length_normalize", v.length_normalize}};
}

void from_json(const Json& j, SearchConfig& v) {
  optional_into(j, "budget", v.budget);
  if (j.contains("strategy")) {
    v.strategy = parse_strategy(required<std::string>(j, "strategy"));
  }
  optional_into(j, "seed", v.seed);
  optional_into(j, "n_train", v.n_train);
  optional_into(j, "gen_temperature", v.gen_temperature);
  optional_into(j, "eval_temperature", v.eval_temperature);
  optional_into(j, "max_separator_tokens", v.max_separator_tokens);
  optional_into(j, "max_separator_chars", v.max_separator_chars);
  optional_into(j, "opro_steps", v.opro_steps);
  optional_into(j, "opro_per_step", v.opro_per_step);
  optional_into(j, "opro_history_cap", v.opro_history_cap);
  optional_into(j, "opro_start", v.opro_start);
  optional_into(j, "length_normalize", v.length_normalize);
}

void to_json(Json& j, const Vocabulary& v) {
  j = Json{{"tokens", v.tokens},
           {"special_indices",
            std::vector<std::size_t>(v.special.begin(), v.special.end())}};
}

void from_json(const Json& j, Vocabulary& v) {
  v.tokens = required<std::vector<std::string>>(j, "tokens");
  v.special.clear();
  if (j.contains("special_indices")) {
    for (auto i : required<std::vector<std::size_t>>(j, "special_indices")) {
      v.special.insert(i);
    }
  }
}

void to_json(Json& j, const CurvePoint& v) {
  j = Json{{"iteration", v.iteration}, {"best_accuracy", v.best_accuracy}};
}

void from_json(const Json& j, CurvePoint& v) {
  v.iteration = required<std::uint64_t>(j, "iteration");
  v.best_accuracy = required<double>(j, "best_accuracy");
}

Json task_header_to_json(const TaskSpec& task) {
  return Json{{"name", task.name},
              {"kind", to_string(task.kind)},
              {"labels", task.labels},
              {"template", task.prompt_template},
              {"context_shots", task.context_shots}};
}

void apply_task_header(const Json& j, TaskSpec& task) {
  task.name = required<std::string>(j, "name");
  task.kind = TaskKind::kClassification;
  if (j.contains("kind")) {
    task.kind = parse_task_kind(required<std::string>(j, "kind"));
  }
  task.labels.clear();
  if (j.contains("labels")) {
    const auto& labels = j.at("labels");
    if (!labels.is_array()) {
      throw Error(ErrorCode::kParse, "field 'labels' must be an array");
    }
    // Either ["negative", "positive"] (ids by position) or explicit objects.
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i].is_string()) {
        task.labels.push_back(
            Label{static_cast<int>(i), labels[i].get<std::string>()});
      } else {
        task.labels.push_back(labels[i].get<Label>());
      }
    }
  }
  task.prompt_template = PromptTemplate{};
  if (j.contains("template")) {
    task.prompt_template = j.at("template").get<PromptTemplate>();
  }
  optional_into(j, "context_shots", task.context_shots);
}

std::string dump_line(const Json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::strict);
}

Json parse_json(std::string_view text, std::string_view where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::kParse, fmt::format("{}: {}", where, e.what()));
  }
}

std::string digest(const Json& j) { return hex64(fnv1a64(dump_line(j))); }

}  // namespace seprand

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

#include "seprand/task.hpp"

#include <map>
#include <set>
#include <unordered_set>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "seprand/error.hpp"
#include "seprand/text.hpp"

namespace seprand {
namespace {

void check_placeholder(std::vector<std::string>& out, std::string_view field,
                       std::string_view format, std::string_view name) {
  const auto n = count_occurrences(format, name);
  if (n != 1) {
    out.push_back(fmt::format("{}: placeholder {} must appear exactly once "
                              "(found {})",
                              field, name, n));
  }
}

void check_examples(std::vector<std::string>& out, const TaskSpec& task,
                    std::string_view split_name,
                    const std::vector<Example>& examples) {
  const auto n_labels = static_cast<int>(task.labels.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto& ex = examples[i];
    if (trim(ex.text).empty()) {
      out.push_back(fmt::format("{}[{}].text: must be non-empty after trimming",
                                split_name, i));
    }
    if (task.kind == TaskKind::kClassification) {
      if (!ex.has_label()) {
        out.push_back(fmt::format(
            "{}[{}].label: classification examples need an integer label",
            split_name, i));
      } else if (ex.label() < 0 || ex.label() >= n_labels) {
        out.push_back(fmt::format("{}[{}].label: label_id {} outside 0..{}",
                                  split_name, i, ex.label(), n_labels - 1));
      }
    } else if (ex.has_label()) {
      out.push_back(fmt::format(
          "{}[{}].answer: generative examples need an answer string",
          split_name, i));
    }
  }
}

}  // namespace

std::vector<std::string> validate_template(const PromptTemplate& tmpl) {
  std::vector<std::string> out;
  for (auto name : {"{input}", "{separator}", "{output}"}) {
    check_placeholder(out, "template.example_format", tmpl.example_format,
                      name);
  }
  for (auto name : {"{input}", "{separator}"}) {
    check_placeholder(out, "template.query_format", tmpl.query_format, name);
  }
  return out;
}

std::vector<std::string> validate_task(const TaskSpec& task) {
  std::vector<std::string> out;
  if (trim(task.name).empty()) out.emplace_back("name: must be non-empty");

  if (task.kind == TaskKind::kGenerative) {
    if (!task.labels.empty()) {
      out.emplace_back("labels: generative tasks take no labels");
    }
  } else {
    if (task.labels.empty()) {
      out.emplace_back("labels: classification tasks need at least one label");
    }
    std::map<int, int> id_counts;
    for (const auto& label : task.labels) ++id_counts[label.id];
    bool duplicated = false;
    for (const auto& [id, count] : id_counts) {
      if (count > 1) {
        out.push_back(fmt::format("labels: duplicate label_id {}", id));
        duplicated = true;
      }
    }
    // With duplicates the gap is implied; report it only once.
    if (!duplicated) {
      const auto n = static_cast<int>(task.labels.size());
      for (const auto& [id, count] : id_counts) {
        if (id < 0 || id >= n) {
          out.push_back(fmt::format(
              "labels: label_id {} breaks the gap-free range 0..{}", id, n - 1));
        }
      }
    }
    std::set<std::string> seen;
    for (const auto& label : task.labels) {
      if (label.verbalization.empty()) {
        out.push_back(
            fmt::format("labels: verbalization of label_id {} is empty",
                        label.id));
      } else if (!seen.insert(label.verbalization).second) {
        out.push_back(fmt::format("labels: duplicate verbalization '{}'",
                                  label.verbalization));
      }
    }
  }

  check_examples(out, task, "train", task.train);
  check_examples(out, task, "test", task.test);

  std::unordered_set<std::string_view> train_texts;
  for (const auto& ex : task.train) train_texts.insert(ex.text);
  for (std::size_t i = 0; i < task.test.size(); ++i) {
    if (train_texts.contains(task.test[i].text)) {
      out.push_back(
          fmt::format("test[{}].text: also present in train split", i));
    }
  }

  auto tmpl = validate_template(task.prompt_template);
  out.insert(out.end(), tmpl.begin(), tmpl.end());

  if (task.context_shots < 0) {
    out.emplace_back("context_shots: must be non-negative");
  }
  return out;
}

void require_valid_task(const TaskSpec& task) {
  const auto violations = validate_task(task);
  if (violations.empty()) return;
  throw Error(ErrorCode::kInvalidArgument,
              fmt::format("task '{}' is invalid: {}", task.name,
                          fmt::join(violations, "; ")));
}

}  // namespace seprand

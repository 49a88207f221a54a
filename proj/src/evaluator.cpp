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

#include "seprand/evaluator.hpp"

#include <algorithm>
#include <regex>

#include <fmt/format.h>

#include "seprand/error.hpp"
#include "seprand/parallel.hpp"
#include "seprand/text.hpp"

namespace seprand {
namespace {

std::string render_demo(const PromptTemplate& tmpl, std::string_view input,
                        std::string_view separator, std::string_view output) {
  return render_format(tmpl.example_format, {{"input", input},
                                             {"separator", separator},
                                             {"output", output}});
}

std::vector<const Label*> labels_by_id(const TaskSpec& task) {
  std::vector<const Label*> out;
  for (const auto& label : task.labels) out.push_back(&label);
  std::sort(out.begin(), out.end(),
            [](const Label* a, const Label* b) { return a->id < b->id; });
  return out;
}

ScoreRecord make_record(const Separator& separator, Split split,
                        std::vector<Prediction> predictions,
                        const std::vector<char>& correct,
                        const EvalOptions& options) {
  ScoreRecord record;
  record.separator = separator;
  record.split = split;
  record.n_evaluated = static_cast<std::uint32_t>(correct.size());
  record.n_correct = static_cast<std::uint32_t>(
      std::count(correct.begin(), correct.end(), char{1}));
  if (options.keep_predictions) record.predictions = std::move(predictions);
  return record;
}

}  // namespace

ContextBlock make_context_block(const TaskSpec& task,
                                std::vector<Example> examples) {
  ContextBlock block;
  const auto& tmpl = task.prompt_template;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    block.outputs.push_back(task.verbalize(examples[i]));
    if (i > 0) block.rendered += tmpl.example_joiner;
    block.rendered += render_demo(tmpl, examples[i].text, "{separator}",
                                  block.outputs.back());
  }
  block.examples = std::move(examples);
  return block;
}

std::string assemble_prompt(const PromptTemplate& tmpl,
                            const ContextBlock& context,
                            std::string_view input_text,
                            const Separator& separator) {
  if (context.outputs.size() != context.examples.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "context block outputs do not match its examples");
  }
  std::string prompt;
  for (std::size_t i = 0; i < context.examples.size(); ++i) {
    prompt += render_demo(tmpl, context.examples[i].text, separator.text,
                          context.outputs[i]);
    prompt += tmpl.example_joiner;
  }
  prompt += render_format(tmpl.query_format,
                          {{"input", input_text}, {"separator", separator.text}});
  return prompt;
}

std::vector<double> label_scores(Backend& backend, const TaskSpec& task,
                                 std::string_view prompt,
                                 const EvalOptions& options) {
  if (task.kind != TaskKind::kClassification) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("task '{}' is not a classification task", task.name));
  }
  const auto labels = labels_by_id(task);
  std::vector<std::string> continuations;
  continuations.reserve(labels.size());
  for (const auto* label : labels) {
    continuations.push_back(task.prompt_template.continuation_prefix +
                            label->verbalization);
  }
  auto response = score_checked(backend, prompt, continuations);
  if (options.length_normalize) {
    for (std::size_t i = 0; i < response.logprobs.size(); ++i) {
      response.logprobs[i] /= response.tokens_evaluated[i];
    }
  }
  return response.logprobs;
}

int argmax_first(std::span<const double> scores) {
  if (scores.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "argmax over an empty set");
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return static_cast<int>(best);
}

int predict_label(Backend& backend, const TaskSpec& task,
                  std::string_view prompt, const EvalOptions& options) {
  const auto scores = label_scores(backend, task, prompt, options);
  return labels_by_id(task)[argmax_first(scores)]->id;
}

ScoreRecord score_separator(Backend& backend, const TaskSpec& task,
                            const Separator& separator, Split split,
                            const ContextBlock& context,
                            const EvalOptions& options) {
  const auto& examples = task.split(split);
  if (examples.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} split of '{}' is empty", to_string(split),
                            task.name));
  }
  std::vector<Prediction> predictions(examples.size());
  std::vector<char> correct(examples.size(), 0);
  parallel_for(examples.size(), backend.max_concurrency(), [&](std::size_t i) {
    const auto prompt = assemble_prompt(task.prompt_template, context,
                                        examples[i].text, separator);
    const int predicted = predict_label(backend, task, prompt, options);
    predictions[i] = Prediction{i, predicted};
    correct[i] = predicted == examples[i].label() ? 1 : 0;
  });
  return make_record(separator, split, std::move(predictions), correct,
                     options);
}

std::string extract_final_answer(std::string_view generation) {
  static const std::regex kNumber(R"([-+]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?)");
  const std::string text(generation);
  std::string last;
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kNumber);
       it != std::sregex_iterator(); ++it) {
    last = it->str();
  }
  std::erase(last, ',');
  return last;
}

std::string normalize_answer(std::string_view answer) {
  std::string out(trim(answer));
  if (out.find('.') != std::string::npos) {
    while (!out.empty() && out.back() == '0') out.pop_back();
    if (!out.empty() && out.back() == '.') out.pop_back();
  }
  return out;
}

ScoreRecord score_generative(Backend& backend, const TaskSpec& task,
                             const Separator& separator,
                             const ContextBlock& context,
                             const GenParams& params, Split split,
                             const EvalOptions& options) {
  if (task.kind != TaskKind::kGenerative) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("task '{}' is not a generative task", task.name));
  }
  if (context.examples.size() != static_cast<std::size_t>(task.context_shots)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("context has {} demonstrations; task expects {}",
                            context.examples.size(), task.context_shots));
  }
  const auto& examples = task.split(split);
  if (examples.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("{} split of '{}' is empty", to_string(split),
                            task.name));
  }
  std::vector<Prediction> predictions(examples.size());
  std::vector<char> correct(examples.size(), 0);
  parallel_for(examples.size(), backend.max_concurrency(), [&](std::size_t i) {
    const auto prompt = assemble_prompt(task.prompt_template, context,
                                        examples[i].text, separator);
    auto extracted = extract_final_answer(generate_text(backend, prompt, params));
    correct[i] = !extracted.empty() && normalize_answer(extracted) ==
                                           normalize_answer(examples[i].answer());
    predictions[i] = Prediction{i, std::move(extracted)};
  });
  return make_record(separator, split, std::move(predictions), correct,
                     options);
}

}  // namespace seprand

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
/// Separator evaluation: prompt assembly, label prediction by restricted
/// argmax over the verbalizer, and split-level accuracy.
///
/// A prompt is the rendered demonstrations, the example joiner, then the
/// query. With the default template and separator "Answer:":
///
///   great film Answer: positive
///   dull plot Answer:
///
/// and each label is scored as the continuation " <verbalization>".

#ifndef SEPRAND_EVALUATOR_HPP_
#define SEPRAND_EVALUATOR_HPP_

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seprand/backend.hpp"
#include "seprand/types.hpp"

namespace seprand {

ContextBlock make_context_block(const TaskSpec& task,
                                std::vector<Example> examples);

std::string assemble_prompt(const PromptTemplate& tmpl,
                            const ContextBlock& context,
                            std::string_view input_text,
                            const Separator& separator);

struct EvalOptions {
  /// Divide each label's logprob by its token count.
  bool length_normalize = false;
  /// Record per-example predictions in the ScoreRecord.
  bool keep_predictions = true;
};

/// Per-label totals for `prompt`, ordered by label_id.
std::vector<double> label_scores(Backend& backend, const TaskSpec& task,
                                 std::string_view prompt,
                                 const EvalOptions& options = {});

/// Index of the maximum; ties go to the smallest index.
int argmax_first(std::span<const double> scores);

int predict_label(Backend& backend, const TaskSpec& task,
                  std::string_view prompt, const EvalOptions& options = {});

/// Accuracy of `separator` over a whole split, with `context` shared by all
/// examples. Examples run concurrently up to backend.max_concurrency(). Any
/// failure discards the record.
ScoreRecord score_separator(Backend& backend, const TaskSpec& task,
                            const Separator& separator, Split split,
                            const ContextBlock& context,
                            const EvalOptions& options = {});

/// Last signed decimal in `generation` (thousands separators allowed and
/// removed), or "" when there is none.
std::string extract_final_answer(std::string_view generation);

/// Trims, then drops trailing fractional zeros ("8.0" -> "8").
std::string normalize_answer(std::string_view answer);

/// Few-shot generative scoring: one generation per example (voting@1),
/// final-answer extraction, exact match after normalization.
ScoreRecord score_generative(Backend& backend, const TaskSpec& task,
                             const Separator& separator,
                             const ContextBlock& context,
                             const GenParams& params, Split split = Split::kTest,
                             const EvalOptions& options = {});

}  // namespace seprand

#endif  // SEPRAND_EVALUATOR_HPP_

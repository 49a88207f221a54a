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

#include "seprand/search.hpp"

#include <algorithm>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "seprand/error.hpp"
#include "seprand/evaluator.hpp"
#include "seprand/meta_prompts.hpp"
#include "seprand/rng.hpp"
#include "seprand/strategies.hpp"
#include "seprand/task.hpp"

namespace seprand {
namespace {

// Stream tag for the exemplars shown in an OPRO round.
constexpr std::uint64_t kOproExemplarStream = 0xC0;

bool better(const ScoreRecord& a, const ScoreRecord& b) {
  if (!accuracy_equal(a, b)) return accuracy_less(b, a);
  if (a.separator.iteration != b.separator.iteration) {
    return a.separator.iteration < b.separator.iteration;
  }
  return a.separator.text < b.separator.text;
}

SeparatorLimits limits_of(const SearchConfig& config) {
  return {config.max_separator_tokens, config.max_separator_chars};
}

TaskSpec training_view(const TaskSpec& task, std::uint32_t n_train) {
  if (task.train.size() < n_train) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("task '{}' has {} training examples; n_train is {}",
                            task.name, task.train.size(), n_train));
  }
  TaskSpec view = task;
  view.train.resize(n_train);
  return view;
}

void check_inputs(const SearchInputs& in) {
  if (!in.task || !in.context || !in.backend) {
    throw Error(ErrorCode::kInvalidArgument,
                "search needs a task, a context block and a backend");
  }
  const auto violations = validate_config(in.config);
  if (!violations.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("invalid search config: {}",
                            fmt::join(violations, "; ")));
  }
  require_valid_task(*in.task);
  if (in.task->kind != TaskKind::kClassification) {
    throw Error(ErrorCode::kInvalidArgument,
                "search scores classification tasks only");
  }
  if (in.config.strategy == Strategy::kRandomVocabulary) {
    if (!in.vocab || in.vocab->usable_indices().empty()) {
      throw Error(ErrorCode::kInvalidVocabulary,
                  "random vocabulary search needs a usable vocabulary");
    }
  }
}

class SearchState {
 public:
  SearchState(RunObserver* observer) : observer_(observer) {}

  void add(ScoreRecord record) {
    if (observer_) observer_->record(record);
    result.records.push_back(std::move(record));
  }
  void skip(std::uint64_t iteration, const std::string& reason) {
    if (observer_) observer_->skipped(iteration, reason);
  }

  SearchResult result;

 private:
  RunObserver* observer_;
};

void run_random(const SearchInputs& in, const TaskSpec& task,
                SearchState& state) {
  for (std::uint64_t i = 0; i < in.config.budget; ++i) {
    Separator candidate;
    try {
      candidate =
          generate_random_candidate(in.config, task, *in.backend, in.vocab, i);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateGeneration) throw;
      state.skip(i, e.what());
      continue;
    }
    state.add(score_separator(*in.backend, task, candidate, Split::kTrain,
                              *in.context,
                              {.length_normalize = in.config.length_normalize}));
  }
}

void run_opro(const SearchInputs& in, const TaskSpec& task, SearchState& state,
              RunObserver* observer) {
  const auto& config = in.config;
  const bool with_instructions = config.strategy == Strategy::kOpro;
  const EvalOptions eval{.length_normalize = config.length_normalize};

  const auto start = score_separator(*in.backend, task,
                                     fixed_separator(config.opro_start),
                                     Split::kTrain, *in.context, eval);
  if (observer) observer->opro_seed(start);

  OproState opro;
  opro.history.push_back({start.separator.text, start.percent_score()});
  const auto params =
      separator_gen_params(config.gen_temperature, limits_of(config));
  for (std::uint64_t step = 0; step < config.opro_steps; ++step) {
    const auto step_seed = derive_seed(config.seed, step);
    opro.step = step;
    opro.context_examples =
        draw_context_examples(task, derive_seed(step_seed, kOproExemplarStream));
    const auto proposals = propose_opro_step(
        *in.backend, opro, task, with_instructions, config.opro_per_step,
        params, step_seed, config.opro_history_cap, config.max_separator_chars);
    std::vector<OproEntry> scored;
    for (const auto& candidate : proposals) {
      auto record = score_separator(*in.backend, task, candidate, Split::kTrain,
                                    *in.context, eval);
      scored.push_back({candidate.text, record.percent_score()});
      state.add(std::move(record));
    }
    if (proposals.size() < config.opro_per_step) {
      state.skip(step, fmt::format("{} of {} proposals empty or repeated",
                                   config.opro_per_step - proposals.size(),
                                   config.opro_per_step));
    }
    opro.history.insert(opro.history.end(), scored.begin(), scored.end());
  }
}

}  // namespace

const ScoreRecord& select_best(std::span<const ScoreRecord> records) {
  if (records.empty()) {
    throw Error(ErrorCode::kEmptySearch, "no scored separators to select from");
  }
  const ScoreRecord* best = &records.front();
  for (const auto& r : records.subspan(1)) {
    if (better(r, *best)) best = &r;
  }
  return *best;
}

std::vector<CurvePoint> best_so_far_curve(std::span<const ScoreRecord> records) {
  std::vector<CurvePoint> curve;
  if (records.empty()) return curve;
  std::vector<const ScoreRecord*> ordered;
  for (const auto& r : records) ordered.push_back(&r);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const ScoreRecord* a, const ScoreRecord* b) {
                     return a->separator.iteration < b->separator.iteration;
                   });
  const ScoreRecord* best = nullptr;
  std::size_t k = 0;
  const auto first = ordered.front()->separator.iteration;
  const auto last = ordered.back()->separator.iteration;
  for (auto it = first; it <= last; ++it) {
    for (; k < ordered.size() && ordered[k]->separator.iteration == it; ++k) {
      if (!best || accuracy_less(*best, *ordered[k])) best = ordered[k];
    }
    curve.push_back({it, best->accuracy()});
  }
  return curve;
}

Separator generate_random_candidate(const SearchConfig& config,
                                    const TaskSpec& task, Backend& backend,
                                    const Vocabulary* vocab,
                                    std::uint64_t iteration) {
  const auto seed = derive_seed(config.seed, iteration);
  const auto limits = limits_of(config);
  const auto params = separator_gen_params(config.gen_temperature, limits);
  Separator out;
  switch (config.strategy) {
    case Strategy::kRandomVocabulary:
      if (!vocab) {
        throw Error(ErrorCode::kInvalidVocabulary, "no vocabulary supplied");
      }
      out = sample_random_vocabulary(*vocab, seed, limits);
      break;
    case Strategy::kRandomNoContext:
      out = sample_lm_prior(backend, params, seed, limits.max_chars);
      break;
    case Strategy::kRandomWithContext:
      out = sample_lm_with_context(backend, task, params, seed,
                                   limits.max_chars);
      break;
    default:
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("{} is not a random strategy",
                              to_string(config.strategy)));
  }
  out.iteration = iteration;
  return out;
}

Json search_manifest(const SearchInputs& in) {
  Json context = Json::array();
  for (const auto& ex : in.context->examples) context.push_back(ex);
  Json manifest{{"task", in.task->name},
                {"strategy", to_string(in.config.strategy)},
                {"seed", in.config.seed},
                {"budget", in.config.budget},
                {"model", in.backend->model_name()},
                {"config", in.config},
                {"config_digest", digest(Json(in.config))},
                {"context", context},
                {"vocab_digest", nullptr}};
  if (in.vocab) {
    manifest["vocab_digest"] = digest(Json(*in.vocab));
    manifest["vocab_size"] = in.vocab->tokens.size();
  }
  return manifest;
}

SearchResult run_search(const SearchInputs& inputs, RunObserver* observer,
                        std::string* abort_reason) {
  check_inputs(inputs);
  const auto task = training_view(*inputs.task, inputs.config.n_train);
  if (inputs.config.strategy == Strategy::kRandomWithContext ||
      is_opro_strategy(inputs.config.strategy)) {
    if (task.train.size() < kContextExampleCount) {
      throw Error(ErrorCode::kInsufficientContext,
                  "context-conditioned strategies need >= 3 training examples");
    }
  }

  SearchState state(observer);
  state.result.config_digest = digest(Json(inputs.config));
  if (observer) observer->manifest(search_manifest(inputs));

  std::string reason;
  try {
    if (is_random_strategy(inputs.config.strategy)) {
      run_random(inputs, task, state);
    } else {
      run_opro(inputs, task, state, observer);
    }
  } catch (const Error& e) {
    if (!is_backend_error(e.code())) throw;
    reason = fmt::format("{}: {}", error_code_name(e.code()), e.what());
    state.result.complete = false;
  }

  auto& result = state.result;
  if (!result.records.empty()) {
    result.best = select_best(result.records);
    result.curve = best_so_far_curve(result.records);
  } else if (result.complete) {
    reason = "every candidate was skipped";
  }
  if (observer) observer->finish(result.complete, reason);
  if (abort_reason) *abort_reason = reason;
  return result;
}

SearchResult result_from_log(const RunLog& log) {
  SearchResult result;
  result.records = log.records;
  result.complete = log.complete();
  if (log.manifest.contains("config_digest")) {
    result.config_digest = log.manifest["config_digest"].get<std::string>();
  }
  if (!result.records.empty()) {
    result.best = select_best(result.records);
    result.curve = best_so_far_curve(result.records);
  }
  return result;
}

}  // namespace seprand

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

#include "seprand/meta_prompts.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "seprand/error.hpp"
#include "seprand/text.hpp"

namespace seprand {

std::string render_exemplars(std::span<const Example> examples,
                             const TaskSpec& task) {
  std::string out;
  for (const auto& ex : examples) {
    out += fmt::format("{} {} {}\n", ex.text, kInsertionMarker,
                       task.verbalize(ex));
  }
  return out;
}

std::vector<OproEntry> prepare_history(std::span<const OproEntry> history,
                                       std::uint32_t cap) {
  std::vector<OproEntry> sorted(history.begin(), history.end());
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const OproEntry& a, const OproEntry& b) {
                     return a.score < b.score;
                   });
  if (sorted.size() > cap) {
    sorted.erase(sorted.begin(),
                 sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() - cap));
  }
  return sorted;
}

std::string render_history(std::span<const OproEntry> prepared) {
  std::string out;
  for (const auto& entry : prepared) {
    out += fmt::format("text: {}\nscore: {}\n\n", entry.text, entry.score);
  }
  return out;
}

std::string build_context_meta_prompt(std::span<const Example> context_examples,
                                      const TaskSpec& task) {
  if (context_examples.size() < kContextExampleCount) {
    throw Error(ErrorCode::kInsufficientContext,
                fmt::format("context meta-prompt needs {} examples, got {}",
                            kContextExampleCount, context_examples.size()));
  }
  if (context_examples.size() > kContextExampleCount) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("context meta-prompt takes exactly {} examples, "
                            "got {}",
                            kContextExampleCount, context_examples.size()));
  }
  const auto exemplars = render_exemplars(context_examples, task);
  return render_format(context_template(), {{"exemplars", exemplars}});
}

std::string build_opro_meta_prompt(const OproState& state, const TaskSpec& task,
                                   bool with_instructions,
                                   std::uint32_t history_cap) {
  if (state.history.empty()) {
    throw Error(ErrorCode::kInvalidState,
                "OPRO meta-prompt needs at least one scored solution");
  }
  if (history_cap == 0) {
    throw Error(ErrorCode::kInvalidArgument, "history cap must be positive");
  }
  const auto prepared = prepare_history(state.history, history_cap);
  const auto history = render_history(prepared);
  const auto exemplars = render_exemplars(state.context_examples, task);
  return render_format(with_instructions ? opro_template() : opro_icl_template(),
                       {{"history", history}, {"exemplars", exemplars}});
}

}  // namespace seprand

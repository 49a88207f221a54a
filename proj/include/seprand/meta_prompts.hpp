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
/// Meta-prompts that ask a language model to propose new separators.
/// All builders are pure string functions; their output is pinned byte for
/// byte by golden files.

#ifndef SEPRAND_META_PROMPTS_HPP_
#define SEPRAND_META_PROMPTS_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "seprand/types.hpp"

namespace seprand {

/// Marks the separator slot inside exemplar lines.
inline constexpr std::string_view kInsertionMarker = "<INS>";
inline constexpr std::size_t kContextExampleCount = 3;
inline constexpr std::uint32_t kDefaultHistoryCap = 20;

// Embedded copies of templates/*.txt.
std::string_view opro_template();
std::string_view opro_icl_template();
std::string_view context_template();

/// One scored solution shown to the optimizer, score on a 0..100 scale.
struct OproEntry {
  std::string text;
  int score = 0;

  friend bool operator==(const OproEntry&, const OproEntry&) = default;
};

struct OproState {
  std::vector<OproEntry> history;
  std::uint64_t step = 0;
  std::vector<Example> context_examples;
};

/// "{text} <INS> {verbalization}\n" per example.
std::string render_exemplars(std::span<const Example> examples,
                             const TaskSpec& task);

/// The `cap` best entries, in ascending score order. Equal scores keep
/// their insertion order; at the cap boundary later entries win.
std::vector<OproEntry> prepare_history(std::span<const OproEntry> history,
                                       std::uint32_t cap);

/// "text: {s}\nscore: {m}\n\n" per entry of an already prepared history.
std::string render_history(std::span<const OproEntry> prepared);

/// Exactly three demonstrations, then the "text:" cue.
std::string build_context_meta_prompt(std::span<const Example> context_examples,
                                      const TaskSpec& task);

/// Full OPRO layout with instructions, or the instruction-free ICL variant.
std::string build_opro_meta_prompt(const OproState& state, const TaskSpec& task,
                                   bool with_instructions,
                                   std::uint32_t history_cap = kDefaultHistoryCap);

}  // namespace seprand

#endif  // SEPRAND_META_PROMPTS_HPP_

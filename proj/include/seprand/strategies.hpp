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
/// Separator generators.
///
///   random vocabulary    tokens drawn uniformly from the vocabulary, no model
///   random w/o context   free-running samples from the model's prior
///   random with context  samples conditioned on three training examples
///   OPRO / OPRO-ICL      proposals from a scored-history meta-prompt
///
/// Every generator is a deterministic function of its inputs, the seed and
/// the backend's state.

#ifndef SEPRAND_STRATEGIES_HPP_
#define SEPRAND_STRATEGIES_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "seprand/backend.hpp"
#include "seprand/meta_prompts.hpp"
#include "seprand/types.hpp"

namespace seprand {

struct SeparatorLimits {
  std::uint32_t max_tokens = 8;
  std::uint32_t max_chars = 64;
};

/// Generations attempted before an empty result becomes an error.
inline constexpr int kMaxGenerationAttempts = 5;

/// Byte-level BPE space markers: U+0120 "Ġ" and U+2581 "▁".
inline constexpr std::string_view kSpaceMarkerGpt = "\xC4\xA0";
inline constexpr std::string_view kSpaceMarkerSentencePiece = "\xE2\x96\x81";

/// Joins sampled tokens: leading space markers become a space, everything
/// else is concatenated as is, and the result is whitespace-trimmed.
std::string join_vocabulary_tokens(std::span<const std::string> tokens);

Separator sample_random_vocabulary(const Vocabulary& vocab, std::uint64_t seed,
                                   SeparatorLimits limits);

/// Generation settings used for separator proposal: the given temperature,
/// max_tokens capped by the separator limit, stop at newline.
GenParams separator_gen_params(double temperature, SeparatorLimits limits);

/// Generates from the empty prompt. Empty outputs are resampled with fresh
/// derived seeds, up to kMaxGenerationAttempts in total.
Separator sample_lm_prior(Backend& backend, const GenParams& params,
                          std::uint64_t seed,
                          std::uint32_t max_chars = SeparatorLimits{}.max_chars);

/// Three training examples drawn with `seed`.
std::vector<Example> draw_context_examples(const TaskSpec& task,
                                           std::uint64_t seed);

Separator sample_lm_with_context(Backend& backend, const TaskSpec& task,
                                 const GenParams& params, std::uint64_t seed,
                                 std::uint32_t max_chars =
                                     SeparatorLimits{}.max_chars);

/// `per_step` independent generations from the step's meta-prompt, empty
/// and repeated strings dropped. Order follows the generation index.
std::vector<Separator> propose_opro_step(
    Backend& backend, const OproState& state, const TaskSpec& task,
    bool with_instructions, std::uint32_t per_step, const GenParams& params,
    std::uint64_t seed, std::uint32_t history_cap = kDefaultHistoryCap,
    std::uint32_t max_chars = SeparatorLimits{}.max_chars);

}  // namespace seprand

#endif  // SEPRAND_STRATEGIES_HPP_

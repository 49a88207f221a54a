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

#include "seprand/strategies.hpp"

#include <set>

#include <fmt/format.h>

#include "seprand/error.hpp"
#include "seprand/parallel.hpp"
#include "seprand/rng.hpp"
#include "seprand/text.hpp"

namespace seprand {
namespace {

std::string clean_generation(std::string_view raw, std::uint32_t max_chars) {
  return std::string(trim(utf8_truncate(trim(raw), max_chars)));
}

// Shared resample-on-empty loop for the two LM samplers.
std::string generate_non_empty(Backend& backend, std::string_view prompt,
                               GenParams params, std::uint64_t seed,
                               std::uint32_t max_chars) {
  for (int attempt = 0; attempt < kMaxGenerationAttempts; ++attempt) {
    params.seed = attempt == 0 ? seed : derive_seed(seed, attempt);
    auto text = clean_generation(generate_text(backend, prompt, params),
                                 max_chars);
    if (!text.empty()) return text;
  }
  throw Error(ErrorCode::kDegenerateGeneration,
              fmt::format("{} consecutive empty generations (seed {})",
                          kMaxGenerationAttempts, seed));
}

}  // namespace

std::string join_vocabulary_tokens(std::span<const std::string> tokens) {
  std::string out;
  for (const auto& token : tokens) {
    std::string_view t = token;
    if (t.starts_with(kSpaceMarkerGpt)) {
      out.push_back(' ');
      t.remove_prefix(kSpaceMarkerGpt.size());
    } else if (t.starts_with(kSpaceMarkerSentencePiece)) {
      out.push_back(' ');
      t.remove_prefix(kSpaceMarkerSentencePiece.size());
    }
    out.append(t);
  }
  return std::string(trim(out));
}

Separator sample_random_vocabulary(const Vocabulary& vocab, std::uint64_t seed,
                                   SeparatorLimits limits) {
  if (limits.max_tokens == 0 || limits.max_chars == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "separator limits must be positive");
  }
  const auto usable = vocab.usable_indices();
  if (usable.empty()) {
    throw Error(ErrorCode::kInvalidVocabulary,
                "vocabulary has no sampleable (non-special) tokens");
  }
  Xoshiro256 rng(seed);
  const auto count = 1 + rng.uniform(limits.max_tokens);
  std::vector<std::string> tokens;
  tokens.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    tokens.push_back(vocab.tokens[usable[rng.uniform(usable.size())]]);
  }
  auto text = std::string(
      trim(utf8_truncate(join_vocabulary_tokens(tokens), limits.max_chars)));
  if (text.empty()) {
    throw Error(ErrorCode::kDegenerateGeneration,
                fmt::format("sampled tokens are all whitespace (seed {})", seed));
  }
  return Separator{std::move(text), Strategy::kRandomVocabulary, 0, seed};
}

GenParams separator_gen_params(double temperature, SeparatorLimits limits) {
  GenParams params;
  params.max_tokens = std::min(limits.max_tokens, kMaxGenerationTokens);
  params.temperature = temperature;
  params.stop = {"\n"};
  return params;
}

Separator sample_lm_prior(Backend& backend, const GenParams& params,
                          std::uint64_t seed, std::uint32_t max_chars) {
  auto text = generate_non_empty(backend, "", params, seed, max_chars);
  return Separator{std::move(text), Strategy::kRandomNoContext, 0, seed};
}

std::vector<Example> draw_context_examples(const TaskSpec& task,
                                           std::uint64_t seed) {
  if (task.train.size() < kContextExampleCount) {
    throw Error(ErrorCode::kInsufficientContext,
                fmt::format("task '{}' has {} training examples; {} needed",
                            task.name, task.train.size(),
                            kContextExampleCount));
  }
  Xoshiro256 rng(seed);
  std::vector<Example> out;
  for (auto i :
       sample_without_replacement(rng, task.train.size(), kContextExampleCount)) {
    out.push_back(task.train[i]);
  }
  return out;
}

Separator sample_lm_with_context(Backend& backend, const TaskSpec& task,
                                 const GenParams& params, std::uint64_t seed,
                                 std::uint32_t max_chars) {
  const auto examples = draw_context_examples(task, seed);
  const auto prompt = build_context_meta_prompt(examples, task);
  auto text = generate_non_empty(backend, prompt, params, seed, max_chars);
  return Separator{std::move(text), Strategy::kRandomWithContext, 0, seed};
}

std::vector<Separator> propose_opro_step(
    Backend& backend, const OproState& state, const TaskSpec& task,
    bool with_instructions, std::uint32_t per_step, const GenParams& params,
    std::uint64_t seed, std::uint32_t history_cap, std::uint32_t max_chars) {
  if (per_step == 0) {
    throw Error(ErrorCode::kInvalidArgument, "per_step must be >= 1");
  }
  const auto prompt =
      build_opro_meta_prompt(state, task, with_instructions, history_cap);
  std::vector<std::string> texts(per_step);
  std::vector<std::uint64_t> seeds(per_step);
  parallel_for(per_step, backend.max_concurrency(), [&](std::size_t j) {
    auto p = params;
    seeds[j] = derive_seed(seed, j);
    p.seed = seeds[j];
    texts[j] = clean_generation(generate_text(backend, prompt, p), max_chars);
  });

  const auto strategy = with_instructions ? Strategy::kOpro : Strategy::kOproIcl;
  std::vector<Separator> out;
  std::set<std::string> seen;
  for (std::size_t j = 0; j < per_step; ++j) {
    if (texts[j].empty() || !seen.insert(texts[j]).second) continue;
    out.push_back(Separator{texts[j], strategy, state.step, seeds[j]});
  }
  return out;
}

}  // namespace seprand

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
/// Budgeted generate -> evaluate -> select loop.
///
/// Random strategies draw candidate i from derive_seed(config.seed, i) only,
/// so a shorter run is an exact prefix of a longer one. OPRO strategies run
/// opro_steps rounds of opro_per_step proposals; the meta-prompt of round t
/// sees only records from rounds before t.

#ifndef SEPRAND_SEARCH_HPP_
#define SEPRAND_SEARCH_HPP_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seprand/backend.hpp"
#include "seprand/run_log.hpp"
#include "seprand/types.hpp"

namespace seprand {

/// Highest accuracy; ties go to the lowest iteration, then the
/// lexicographically smaller text.
const ScoreRecord& select_best(std::span<const ScoreRecord> records);

/// Running maximum per iteration, from the first scored iteration to the
/// last. Iterations without a record repeat the previous value.
std::vector<CurvePoint> best_so_far_curve(std::span<const ScoreRecord> records);

/// Candidate `iteration` of a random-strategy run, before scoring. Exposed
/// for prefix-stability checks.
Separator generate_random_candidate(const SearchConfig& config,
                                    const TaskSpec& task, Backend& backend,
                                    const Vocabulary* vocab,
                                    std::uint64_t iteration);

struct SearchInputs {
  SearchConfig config;
  const TaskSpec* task = nullptr;
  const ContextBlock* context = nullptr;
  Backend* backend = nullptr;
  /// Required for the random vocabulary strategy only.
  const Vocabulary* vocab = nullptr;
};

/// Runs the search and reports each step to `observer`. Backend failures
/// stop the run: the result then has complete == false, and `abort_reason`
/// carries the error text. Candidates whose generation degenerates are
/// skipped but still count against the budget.
SearchResult run_search(const SearchInputs& inputs,
                        RunObserver* observer = nullptr,
                        std::string* abort_reason = nullptr);

/// The manifest written before the first candidate.
Json search_manifest(const SearchInputs& inputs);

/// Rebuilds a SearchResult from a run log (records, best, curve).
SearchResult result_from_log(const RunLog& log);

}  // namespace seprand

#endif  // SEPRAND_SEARCH_HPP_

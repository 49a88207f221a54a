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
/// Task directories and vocabulary files.
///
/// A task directory holds task.json (the header read by apply_task_header),
/// train.jsonl and test.jsonl with one example per line. A vocabulary file
/// holds one token per line; an optional companion file "<path>.special"
/// lists the indices of special tokens, one per line.

#ifndef SEPRAND_INGEST_HPP_
#define SEPRAND_INGEST_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "seprand/backend.hpp"
#include "seprand/types.hpp"

namespace seprand {

/// Examples of one JSONL file; blank lines are ignored. Malformed lines
/// raise kParse naming the file and the 1-based line number.
std::vector<Example> read_examples(const std::filesystem::path& path);

/// The task exactly as stored: full splits, no subsampling.
TaskSpec load_task_files(const std::filesystem::path& task_dir);

/// Draws n_train training examples and then context_shots demonstrations
/// from the rest of the pool, both uniformly without replacement from one
/// seeded stream. The test split is kept as stored.
std::pair<TaskSpec, ContextBlock> load_task(const std::filesystem::path& task_dir,
                                            std::uint32_t n_train,
                                            std::uint64_t seed,
                                            int context_shots);

/// Same selection applied to an already loaded task.
std::pair<TaskSpec, ContextBlock> subsample_task(const TaskSpec& full,
                                                 std::uint32_t n_train,
                                                 std::uint64_t seed,
                                                 int context_shots);

void write_task(const std::filesystem::path& task_dir, const TaskSpec& task);

/// Reads a vocabulary file. `special_path` defaults to "<path>.special"
/// when that file exists.
Vocabulary load_vocabulary(
    const std::filesystem::path& path,
    const std::optional<std::filesystem::path>& special_path = std::nullopt);

/// Fetches the backend's vocabulary.
Vocabulary load_vocabulary(Backend& backend);

/// Writes one token per line and, when there are special tokens, the
/// companion index file. Tokens containing a newline are rejected.
void write_vocabulary(const std::filesystem::path& path,
                      const Vocabulary& vocab);

}  // namespace seprand

#endif  // SEPRAND_INGEST_HPP_

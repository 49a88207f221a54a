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
/// Append-only JSONL run logs. Line kinds, by "type":
///
///   manifest   first line; config, digests, model, context, created_at
///   opro_seed  score of the OPRO starting separator (not a candidate)
///   record     one scored candidate (ScoreRecord fields)
///   skip       a candidate that consumed budget without a score
///   footer     {"status": "complete" | "incomplete", ...}
///   test_eval  held-out score of a selected separator
///
/// Only "created_at" and "completed_at" vary between identical runs.

#ifndef SEPRAND_RUN_LOG_HPP_
#define SEPRAND_RUN_LOG_HPP_

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "seprand/serialize.hpp"
#include "seprand/types.hpp"

namespace seprand {

inline constexpr int kRunLogFormatVersion = 1;

/// "{task}-{strategy}-{seed}.runlog.jsonl" with the CLI strategy name.
std::string run_log_filename(std::string_view task, Strategy strategy,
                             std::uint64_t seed);

/// Sink for search progress. The default implementation discards events.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void manifest(const Json& /*manifest*/) {}
  virtual void opro_seed(const ScoreRecord& /*record*/) {}
  virtual void record(const ScoreRecord& /*record*/) {}
  virtual void skipped(std::uint64_t /*iteration*/,
                       const std::string& /*reason*/) {}
  virtual void finish(bool /*complete*/, const std::string& /*reason*/) {}
};

/// Single-writer JSONL log. Every line is flushed as it is written, so an
/// aborted run leaves a readable prefix.
class RunLogWriter final : public RunObserver {
 public:
  /// `extra` is merged into the manifest line (e.g. task directory).
  RunLogWriter(const std::filesystem::path& path, Json extra = Json::object());

  void manifest(const Json& manifest) override;
  void opro_seed(const ScoreRecord& record) override;
  void record(const ScoreRecord& record) override;
  void skipped(std::uint64_t iteration, const std::string& reason) override;
  void finish(bool complete, const std::string& reason) override;
  void test_eval(const ScoreRecord& record);

 private:
  void write(const Json& line);

  std::ofstream out_;
  Json extra_;
};

struct RunLog {
  Json manifest = Json::object();
  std::optional<ScoreRecord> opro_seed;
  std::vector<ScoreRecord> records;
  std::vector<std::uint64_t> skipped_iterations;
  std::vector<ScoreRecord> test_evals;
  /// "complete", "incomplete", or "" when the footer is missing.
  std::string status;

  bool complete() const { return status == "complete"; }
};

RunLog read_run_log(const std::filesystem::path& path);
RunLog parse_run_log(std::string_view text, std::string_view where = "<memory>");

/// UTC, second resolution, e.g. "2026-10-16T08:00:00Z".
std::string utc_timestamp();

}  // namespace seprand

#endif  // SEPRAND_RUN_LOG_HPP_

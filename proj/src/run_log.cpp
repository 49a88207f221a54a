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

#include "seprand/run_log.hpp"

#include <chrono>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "seprand/error.hpp"

namespace seprand {
namespace {

Json typed_record(std::string_view type, const ScoreRecord& record) {
  Json j = record;
  j["type"] = type;
  return j;
}

}  // namespace

std::string run_log_filename(std::string_view task, Strategy strategy,
                             std::uint64_t seed) {
  return fmt::format("{}-{}-{}.runlog.jsonl", task, short_name(strategy), seed);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

RunLogWriter::RunLogWriter(const std::filesystem::path& path, Json extra)
    : out_(path, std::ios::trunc), extra_(std::move(extra)) {
  if (!out_) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot open run log {}", path.string()));
  }
}

void RunLogWriter::write(const Json& line) {
  out_ << dump_line(line) << '\n';
  out_.flush();
}

void RunLogWriter::manifest(const Json& manifest) {
  Json line = manifest;
  for (const auto& [key, value] : extra_.items()) line[key] = value;
  line["type"] = "manifest";
  line["format_version"] = kRunLogFormatVersion;
  line["created_at"] = utc_timestamp();
  write(line);
}

void RunLogWriter::opro_seed(const ScoreRecord& record) {
  write(typed_record("opro_seed", record));
}

void RunLogWriter::record(const ScoreRecord& record) {
  write(typed_record("record", record));
}

void RunLogWriter::skipped(std::uint64_t iteration, const std::string& reason) {
  write(Json{{"type", "skip"}, {"iteration", iteration}, {"reason", reason}});
}

void RunLogWriter::finish(bool complete, const std::string& reason) {
  Json line{{"type", "footer"},
            {"status", complete ? "complete" : "incomplete"},
            {"completed_at", utc_timestamp()}};
  if (!reason.empty()) line["reason"] = reason;
  write(line);
}

void RunLogWriter::test_eval(const ScoreRecord& record) {
  write(typed_record("test_eval", record));
}

RunLog parse_run_log(std::string_view text, std::string_view where) {
  RunLog log;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  bool saw_manifest = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto loc = fmt::format("{}:{}", where, line_no);
    const auto j = parse_json(line, loc);
    if (!j.is_object() || !j.contains("type") || !j["type"].is_string()) {
      throw Error(ErrorCode::kParse, fmt::format("{}: missing 'type'", loc));
    }
    const auto type = j["type"].get<std::string>();
    try {
      if (type == "manifest") {
        log.manifest = j;
        saw_manifest = true;
      } else if (type == "record") {
        log.records.push_back(j.get<ScoreRecord>());
      } else if (type == "opro_seed") {
        log.opro_seed = j.get<ScoreRecord>();
      } else if (type == "skip") {
        log.skipped_iterations.push_back(
            j.at("iteration").get<std::uint64_t>());
      } else if (type == "footer") {
        log.status = j.at("status").get<std::string>();
      } else if (type == "test_eval") {
        log.test_evals.push_back(j.get<ScoreRecord>());
      } else {
        throw Error(ErrorCode::kParse,
                    fmt::format("unknown line type '{}'", type));
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, fmt::format("{}: {}", loc, e.what()));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kParse, fmt::format("{}: {}", loc, e.what()));
    }
  }
  if (!saw_manifest) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}: run log has no manifest line", where));
  }
  return log;
}

RunLog read_run_log(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kIo,
                fmt::format("cannot read run log {}", path.string()));
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_run_log(buffer.str(), path.string());
}

}  // namespace seprand

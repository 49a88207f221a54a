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

#include "seprand/ingest.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "seprand/error.hpp"
#include "seprand/evaluator.hpp"
#include "seprand/rng.hpp"
#include "seprand/serialize.hpp"

namespace seprand {
namespace fs = std::filesystem;
namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, fmt::format("cannot open {}", path.string()));
  }
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  }
}

// Lines without their terminating "\n"; a final unterminated line counts.
std::vector<std::string> split_lines(const std::string& content) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < content.size()) {
    const auto end = content.find('\n', pos);
    if (end == std::string::npos) {
      lines.push_back(content.substr(pos));
      break;
    }
    lines.push_back(content.substr(pos, end - pos));
    pos = end + 1;
  }
  return lines;
}

bool is_blank(std::string_view line) {
  return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

std::string jsonl(const std::vector<Example>& examples) {
  std::string out;
  for (const auto& ex : examples) out += dump_line(Json(ex)) + "\n";
  return out;
}

}  // namespace

std::vector<Example> read_examples(const fs::path& path) {
  const auto lines = split_lines(read_file(path));
  std::vector<Example> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_blank(lines[i])) continue;
    const auto where = fmt::format("{}:{}", path.string(), i + 1);
    const auto j = parse_json(lines[i], where);
    try {
      out.push_back(j.get<Example>());
    } catch (const Error& e) {
      throw Error(ErrorCode::kParse, fmt::format("{}: {}", where, e.what()));
    }
  }
  return out;
}

TaskSpec load_task_files(const fs::path& task_dir) {
  TaskSpec task;
  const auto header_path = task_dir / "task.json";
  const auto header = parse_json(read_file(header_path), header_path.string());
  try {
    apply_task_header(header, task);
  } catch (const Error& e) {
    throw Error(ErrorCode::kParse,
                fmt::format("{}: {}", header_path.string(), e.what()));
  }
  task.train = read_examples(task_dir / "train.jsonl");
  task.test = read_examples(task_dir / "test.jsonl");
  return task;
}

std::pair<TaskSpec, ContextBlock> subsample_task(const TaskSpec& full,
                                                 std::uint32_t n_train,
                                                 std::uint64_t seed,
                                                 int context_shots) {
  if (context_shots < 0) {
    throw Error(ErrorCode::kInvalidArgument, "context_shots must be >= 0");
  }
  const auto pool = full.train.size();
  if (n_train > pool) {
    throw Error(ErrorCode::kInsufficientData,
                fmt::format("task '{}' has {} training examples; n_train is {}",
                            full.name, pool, n_train));
  }
  const auto shots = static_cast<std::size_t>(context_shots);
  if (n_train + shots > pool) {
    throw Error(ErrorCode::kInsufficientContext,
                fmt::format("task '{}' has {} training examples; {} are needed "
                            "for training plus context",
                            full.name, pool, n_train + shots));
  }
  Xoshiro256 rng(seed);
  const auto picks = sample_without_replacement(rng, pool, n_train + shots);
  TaskSpec task = full;
  task.context_shots = context_shots;
  task.train.clear();
  std::vector<Example> context;
  for (std::size_t k = 0; k < picks.size(); ++k) {
    (k < n_train ? task.train : context).push_back(full.train[picks[k]]);
  }
  auto block = make_context_block(task, std::move(context));
  return {std::move(task), std::move(block)};
}

std::pair<TaskSpec, ContextBlock> load_task(const fs::path& task_dir,
                                            std::uint32_t n_train,
                                            std::uint64_t seed,
                                            int context_shots) {
  return subsample_task(load_task_files(task_dir), n_train, seed,
                        context_shots);
}

void write_task(const fs::path& task_dir, const TaskSpec& task) {
  fs::create_directories(task_dir);
  write_file(task_dir / "task.json", task_header_to_json(task).dump(2) + "\n");
  write_file(task_dir / "train.jsonl", jsonl(task.train));
  write_file(task_dir / "test.jsonl", jsonl(task.test));
}

Vocabulary load_vocabulary(const fs::path& path,
                           const std::optional<fs::path>& special_path) {
  Vocabulary vocab;
  vocab.tokens = split_lines(read_file(path));
  if (vocab.tokens.empty()) {
    throw Error(ErrorCode::kInvalidVocabulary,
                fmt::format("{} holds no tokens", path.string()));
  }
  auto special = special_path;
  if (!special) {
    auto candidate = path;
    candidate += ".special";
    if (fs::exists(candidate)) special = candidate;
  }
  if (special) {
    const auto lines = split_lines(read_file(*special));
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (is_blank(lines[i])) continue;
      std::size_t index = 0;
      const auto* first = lines[i].data();
      const auto* last = first + lines[i].size();
      const auto [ptr, ec] = std::from_chars(first, last, index);
      if (ec != std::errc() || ptr != last || index >= vocab.tokens.size()) {
        throw Error(ErrorCode::kInvalidVocabulary,
                    fmt::format("{}:{}: bad special index '{}'",
                                special->string(), i + 1, lines[i]));
      }
      vocab.special.insert(index);
    }
  }
  return vocab;
}

Vocabulary load_vocabulary(Backend& backend) {
  auto vocab = backend.vocabulary();
  if (vocab.tokens.empty()) {
    throw Error(ErrorCode::kInvalidVocabulary, "backend returned no tokens");
  }
  for (auto index : vocab.special) {
    if (index >= vocab.tokens.size()) {
      throw Error(ErrorCode::kInvalidVocabulary,
                  fmt::format("special index {} out of range", index));
    }
  }
  return vocab;
}

void write_vocabulary(const fs::path& path, const Vocabulary& vocab) {
  std::string out;
  for (std::size_t i = 0; i < vocab.tokens.size(); ++i) {
    if (vocab.tokens[i].find('\n') != std::string::npos) {
      throw Error(ErrorCode::kInvalidVocabulary,
                  fmt::format("token {} contains a newline", i));
    }
    out += vocab.tokens[i] + "\n";
  }
  write_file(path, out);
  if (!vocab.special.empty()) {
    std::string indices;
    for (auto index : vocab.special) indices += fmt::format("{}\n", index);
    auto companion = path;
    companion += ".special";
    write_file(companion, indices);
  }
}

}  // namespace seprand

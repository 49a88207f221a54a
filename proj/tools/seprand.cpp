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

// seprand command-line tool.
//
//   seprand search   --task DIR --strategy vocab --budget 160 --seed 0
//                    --backend mock --out run.jsonl
//   seprand eval     --task DIR --separator "Answer:" --split test --seed 0
//                    --backend http://127.0.0.1:8000 --out baseline.jsonl
//   seprand analyze  --runlogs 'runs/*.jsonl' --baseline baseline.jsonl
//                    --report out/
//   seprand transfer --mode task --runlogs 'runs/*.jsonl' --backend mock
//                    --out transfer.csv
//   seprand curve    --runlog run.jsonl --out curve.csv
//
// Exit codes: 0 success, 2 validation error, 3 backend error, 4 incomplete
// run.

#include <glob.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "seprand/analysis.hpp"
#include "seprand/backend.hpp"
#include "seprand/error.hpp"
#include "seprand/evaluator.hpp"
#include "seprand/ingest.hpp"
#include "seprand/report.hpp"
#include "seprand/run_log.hpp"
#include "seprand/search.hpp"

namespace fs = std::filesystem;

namespace seprand {
namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitBackend = 3;
constexpr int kExitIncomplete = 4;

struct BackendArgs {
  std::string endpoint;
  std::string model;
  double timeout_s = 30.0;
  std::uint32_t max_concurrency = 1;
  std::string cache;
};

void add_backend_options(CLI::App* cmd, BackendArgs& args) {
  cmd->add_option("--backend", args.endpoint, "Backend URL or 'mock'")
      ->required();
  cmd->add_option("--model", args.model,
                  "Model name (default: asked from the backend)");
  cmd->add_option("--timeout", args.timeout_s, "Per-request timeout, seconds")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-concurrency", args.max_concurrency,
                  "Requests in flight at once")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--cache", args.cache, "JSONL request cache file");
}

std::shared_ptr<Backend> open_backend(const BackendArgs& args) {
  BackendSpec spec;
  spec.endpoint = args.endpoint;
  spec.model_name = args.endpoint == "mock" && args.model.empty()
                        ? std::string("mock")
                        : args.model;
  spec.request_timeout = std::chrono::milliseconds(
      static_cast<std::int64_t>(args.timeout_s * 1000.0));
  spec.max_concurrency = args.max_concurrency;
  if (!args.cache.empty()) spec.cache_path = fs::path(args.cache);
  if (const char* token = std::getenv("SEPRAND_API_TOKEN")) {
    if (*token != '\0') spec.api_token = token;
  }
  return make_backend(spec);
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) {
    throw Error(ErrorCode::kIo, fmt::format("cannot write {}", path.string()));
  }
}

// Expands each pattern with glob(3); patterns matching nothing are errors.
std::vector<fs::path> expand_globs(const std::vector<std::string>& patterns) {
  std::vector<fs::path> out;
  for (const auto& pattern : patterns) {
    glob_t g{};
    const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
    if (rc == 0) {
      for (std::size_t i = 0; i < g.gl_pathc; ++i) {
        out.emplace_back(g.gl_pathv[i]);
      }
    }
    ::globfree(&g);
    if (rc != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("no files match '{}'", pattern));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool is_baseline_log(const RunLog& log) {
  return log.manifest.value("strategy", std::string()) ==
         to_string(Strategy::kFixed);
}

// Task, training subset and context exactly as a logged run saw them.
struct RunSetup {
  TaskSpec task;
  ContextBlock context;
};

RunSetup setup_from_manifest(const RunLog& log, const fs::path& where) {
  const auto& m = log.manifest;
  for (const char* key : {"task_dir", "n_train", "context_shots", "seed"}) {
    if (!m.contains(key)) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("{}: manifest lacks '{}'", where.string(), key));
    }
  }
  auto [task, context] = load_task(m["task_dir"].get<std::string>(),
                                   m["n_train"].get<std::uint32_t>(),
                                   m["seed"].get<std::uint64_t>(),
                                   m["context_shots"].get<int>());
  return {std::move(task), std::move(context)};
}

Json task_extra(const fs::path& task_dir, std::uint32_t n_train,
                int context_shots) {
  return Json{{"task_dir", fs::absolute(task_dir).lexically_normal().string()},
              {"n_train", n_train},
              {"context_shots", context_shots}};
}

// ---------------------------------------------------------------------------
// search

struct SearchArgs {
  std::string task_dir;
  std::string strategy;
  std::uint32_t budget = 160;
  std::uint64_t seed = 0;
  std::string vocab;
  std::string out;
  std::uint32_t n_train = 64;
  std::optional<int> context_shots;
  std::uint32_t max_tokens = 8;
  std::uint32_t max_chars = 64;
  std::uint32_t opro_per_step = 4;
  bool length_normalize = false;
  bool skip_test = false;
  BackendArgs backend;
};

int run_search_command(const SearchArgs& args) {
  const auto files = load_task_files(args.task_dir);
  const int shots = args.context_shots.value_or(files.context_shots);
  auto [task, context] = subsample_task(files, args.n_train, args.seed, shots);

  SearchConfig config;
  config.strategy = parse_strategy(args.strategy);
  config.budget = args.budget;
  config.seed = args.seed;
  config.n_train = args.n_train;
  config.max_separator_tokens = args.max_tokens;
  config.max_separator_chars = args.max_chars;
  config.length_normalize = args.length_normalize;
  if (is_opro_strategy(config.strategy)) {
    config.opro_per_step = args.opro_per_step;
    if (args.opro_per_step == 0 || args.budget % args.opro_per_step != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  fmt::format("OPRO budget {} is not a multiple of {} "
                              "candidates per step",
                              args.budget, args.opro_per_step));
    }
    config.opro_steps = args.budget / args.opro_per_step;
  }

  auto backend = open_backend(args.backend);
  std::optional<Vocabulary> vocab;
  if (config.strategy == Strategy::kRandomVocabulary) {
    vocab = args.vocab.empty() ? load_vocabulary(*backend)
                               : load_vocabulary(fs::path(args.vocab));
  }

  const fs::path out = args.out.empty()
                           ? fs::path(run_log_filename(task.name,
                                                       config.strategy,
                                                       config.seed))
                           : fs::path(args.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  RunLogWriter writer(out, task_extra(args.task_dir, args.n_train, shots));

  SearchInputs inputs;
  inputs.config = config;
  inputs.task = &task;
  inputs.context = &context;
  inputs.backend = backend.get();
  inputs.vocab = vocab ? &*vocab : nullptr;
  std::string reason;
  const auto result = run_search(inputs, &writer, &reason);

  if (!result.complete || result.records.empty()) {
    fmt::print(stderr, "search incomplete: {}\n", reason);
    fmt::print("{} records written to {}\n", result.records.size(),
               out.string());
    return kExitIncomplete;
  }
  fmt::print("best separator: {}\ntrain accuracy: {:.4f} ({}/{})\n",
             Json(result.best.separator.text).dump(), result.best.accuracy(),
             result.best.n_correct, result.best.n_evaluated);
  if (!args.skip_test && !task.test.empty()) {
    const auto test = score_separator(*backend, task, result.best.separator,
                                      Split::kTest, context,
                                      {.length_normalize = args.length_normalize});
    writer.test_eval(test);
    fmt::print("test accuracy:  {:.4f} ({}/{})\n", test.accuracy(),
               test.n_correct, test.n_evaluated);
  }
  fmt::print("run log: {}\n", out.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// eval

struct EvalArgs {
  std::string task_dir;
  std::string separator;
  std::string split = "test";
  std::uint64_t seed = 0;
  std::string out;
  std::uint32_t n_train = 64;
  std::optional<int> context_shots;
  std::uint32_t max_new_tokens = 256;
  bool length_normalize = false;
  BackendArgs backend;
};

int run_eval_command(const EvalArgs& args) {
  const auto files = load_task_files(args.task_dir);
  const int shots = args.context_shots.value_or(files.context_shots);
  auto [task, context] = subsample_task(files, args.n_train, args.seed, shots);
  const auto split = parse_split(args.split);
  const auto separator = fixed_separator(args.separator);

  auto backend = open_backend(args.backend);
  std::optional<RunLogWriter> writer;
  if (!args.out.empty()) {
    const fs::path out(args.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    writer.emplace(out, task_extra(args.task_dir, args.n_train, shots));
    Json context_json = Json::array();
    for (const auto& ex : context.examples) context_json.push_back(ex);
    writer->manifest(Json{{"task", task.name},
                          {"strategy", to_string(Strategy::kFixed)},
                          {"seed", args.seed},
                          {"model", backend->model_name()},
                          {"separator", args.separator},
                          {"split", to_string(split)},
                          {"context", context_json}});
  }

  ScoreRecord record;
  try {
    if (task.kind == TaskKind::kGenerative) {
      GenParams params;
      params.max_tokens = args.max_new_tokens;
      params.temperature = 0.0;
      record = score_generative(*backend, task, separator, context, params,
                                split);
    } else {
      record = score_separator(*backend, task, separator, split, context,
                               {.length_normalize = args.length_normalize});
    }
  } catch (const Error& e) {
    if (writer && is_backend_error(e.code())) {
      writer->finish(false, fmt::format("{}: {}", error_code_name(e.code()),
                                        e.what()));
    }
    throw;
  }
  if (writer) {
    writer->record(record);
    writer->finish(true, "");
  }
  fmt::print("{} accuracy: {:.4f} ({}/{})\n", to_string(split),
             record.accuracy(), record.n_correct, record.n_evaluated);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeArgs {
  std::vector<std::string> runlogs;
  std::vector<std::string> baselines;
  std::string report_dir;
};

int run_analyze_command(const AnalyzeArgs& args) {
  std::vector<RunLog> runs;
  std::vector<RunLog> baselines;
  for (const auto& path : expand_globs(args.baselines)) {
    baselines.push_back(read_run_log(path));
  }
  const auto baseline_paths = expand_globs(args.baselines);
  for (const auto& path : expand_globs(args.runlogs)) {
    if (std::find(baseline_paths.begin(), baseline_paths.end(), path) !=
        baseline_paths.end()) {
      continue;
    }
    auto log = read_run_log(path);
    (is_baseline_log(log) ? baselines : runs).push_back(std::move(log));
  }
  if (runs.empty()) {
    throw Error(ErrorCode::kEmptySearch, "no search run logs to analyze");
  }

  const auto report = build_report(runs, baselines);
  const fs::path dir(args.report_dir);
  write_text(dir / "report.md", report.markdown);
  write_text(dir / "report.json", report.json.dump(2) + "\n");

  std::string curves = "task,strategy,seed,iteration,best_accuracy\n";
  for (const auto& log : runs) {
    const auto result = result_from_log(log);
    if (result.records.empty()) continue;
    for (const auto& p : emit_curve(result)) {
      curves += fmt::format("{},{},{},{},{}\n",
                            log.manifest.value("task", std::string()),
                            log.manifest.value("strategy", std::string()),
                            log.manifest.value("seed", std::uint64_t{0}),
                            p.iteration, p.best_accuracy);
    }
  }
  write_text(dir / "curves.csv", curves);
  fmt::print("{}", report.markdown);
  fmt::print("\nreport written to {}\n", dir.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// transfer

struct TransferArgs {
  std::string mode;
  std::vector<std::string> runlogs;
  std::string out;
  BackendArgs backend;
};

int run_transfer_command(const TransferArgs& args) {
  struct Source {
    std::string key;
    RunLog log;
    fs::path path;
  };
  std::vector<Source> sources;
  for (const auto& path : expand_globs(args.runlogs)) {
    auto log = read_run_log(path);
    if (is_baseline_log(log) || log.records.empty()) continue;
    const auto task = log.manifest.value("task", std::string());
    const auto seed = log.manifest.value("seed", std::uint64_t{0});
    const auto key = args.mode == "task" ? task
                                         : fmt::format("{}@seed{}", task, seed);
    const bool seen = std::any_of(sources.begin(), sources.end(),
                                  [&](const Source& s) { return s.key == key; });
    // One run per key; the first in path order wins.
    if (!seen) sources.push_back({key, std::move(log), path});
  }
  if (sources.empty()) {
    throw Error(ErrorCode::kEmptySearch, "no search run logs to transfer");
  }

  // Task mode scores each target task's test split with that task's own
  // context; context mode re-scores the training split of one task under
  // every run's context.
  const Split split = args.mode == "task" ? Split::kTest : Split::kTrain;
  if (args.mode == "context") {
    const auto& first = sources.front().log.manifest["task"];
    for (const auto& s : sources) {
      if (s.log.manifest["task"] != first) {
        throw Error(ErrorCode::kInvalidArgument,
                    "context transfer needs run logs of a single task");
      }
    }
  }

  std::map<std::string, RunSetup> setups;
  std::map<std::string, Separator> best;
  std::vector<std::string> targets;
  for (const auto& s : sources) {
    setups.emplace(s.key, setup_from_manifest(s.log, s.path));
    best.emplace(s.key, select_best(s.log.records).separator);
    targets.push_back(s.key);
  }

  auto backend = open_backend(args.backend);
  const TransferEval eval = [&](const Separator& separator,
                                const std::string& target) {
    const auto& setup = setups.at(target);
    return score_separator(*backend, setup.task, separator, split,
                           setup.context, {.keep_predictions = false})
        .accuracy();
  };
  const auto matrix = build_transfer_matrix(best, targets, eval);

  const fs::path out(args.out);
  write_text(out, transfer_matrix_csv(matrix));
  auto bands = out;
  bands.replace_extension(".bands.csv");
  write_text(bands, transfer_bands_csv(matrix));
  fmt::print("{}", transfer_matrix_csv(matrix));
  fmt::print("\nmatrix: {}\nbands:  {}\n", out.string(), bands.string());
  return kExitOk;
}

// ---------------------------------------------------------------------------
// curve

int run_curve_command(const std::string& runlog, const std::string& out) {
  const auto result = result_from_log(read_run_log(runlog));
  write_text(out, emit_curve_csv(emit_curve(result)));
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  return is_backend_error(code) ? kExitBackend : kExitValidation;
}

}  // namespace
}  // namespace seprand

int main(int argc, char** argv) {
  using namespace seprand;
  CLI::App app{"seprand: budgeted random-separator prompt search"};
  app.require_subcommand(1);

  SearchArgs search;
  auto* s = app.add_subcommand("search", "Search for a separator");
  s->add_option("--task", search.task_dir, "Task directory")->required();
  s->add_option("--strategy", search.strategy, "Generation strategy")
      ->required()
      ->check(CLI::IsMember({"vocab", "prior", "context", "opro", "opro-icl"}));
  s->add_option("--budget", search.budget, "Candidates to score")
      ->check(CLI::PositiveNumber);
  s->add_option("--seed", search.seed, "Run seed");
  s->add_option("--vocab", search.vocab,
                "Vocabulary file (default: the backend's vocabulary)");
  s->add_option("--out", search.out, "Run log path");
  s->add_option("--n-train", search.n_train, "Training examples to score on");
  s->add_option("--context-shots", search.context_shots,
                "Demonstrations in the prompt (default: task.json)");
  s->add_option("--max-separator-tokens", search.max_tokens);
  s->add_option("--max-separator-chars", search.max_chars);
  s->add_option("--opro-per-step", search.opro_per_step,
                "OPRO candidates per step");
  s->add_flag("--length-normalize", search.length_normalize,
              "Divide label logprobs by token count");
  s->add_flag("--no-test-eval", search.skip_test,
              "Skip scoring the best separator on the test split");
  add_backend_options(s, search.backend);

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Score one fixed separator");
  e->add_option("--task", eval.task_dir, "Task directory")->required();
  e->add_option("--separator", eval.separator, "Separator text")->required();
  e->add_option("--split", eval.split)->check(CLI::IsMember({"train", "test"}));
  e->add_option("--seed", eval.seed, "Seed of the training subset and context");
  e->add_option("--out", eval.out, "Write a baseline run log");
  e->add_option("--n-train", eval.n_train);
  e->add_option("--context-shots", eval.context_shots);
  e->add_option("--max-new-tokens", eval.max_new_tokens,
                "Generation length for generative tasks");
  e->add_flag("--length-normalize", eval.length_normalize);
  add_backend_options(e, eval.backend);

  AnalyzeArgs analyze;
  auto* a = app.add_subcommand("analyze", "Aggregate run logs into a report");
  a->add_option("--runlogs", analyze.runlogs, "Run log glob(s)")->required();
  a->add_option("--baseline", analyze.baselines, "Baseline run log(s)");
  a->add_option("--report", analyze.report_dir, "Output directory")
      ->required();

  TransferArgs transfer;
  auto* t = app.add_subcommand("transfer", "Cross-task or cross-context matrix");
  t->add_option("--mode", transfer.mode)
      ->required()
      ->check(CLI::IsMember({"task", "context"}));
  t->add_option("--runlogs", transfer.runlogs, "Run log glob(s)")->required();
  t->add_option("--out", transfer.out, "Matrix CSV path")->required();
  add_backend_options(t, transfer.backend);

  std::string curve_in;
  std::string curve_out;
  auto* c = app.add_subcommand("curve", "Best-so-far curve of one run");
  c->add_option("--runlog", curve_in)->required();
  c->add_option("--out", curve_out)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int rc = app.exit(err);
    return rc == 0 ? 0 : kExitValidation;
  }

  try {
    if (*s) return run_search_command(search);
    if (*e) return run_eval_command(eval);
    if (*a) return run_analyze_command(analyze);
    if (*t) return run_transfer_command(transfer);
    if (*c) return run_curve_command(curve_in, curve_out);
  } catch (const Error& err) {
    fmt::print(stderr, "error [{}]: {}\n", error_code_name(err.code()),
               err.what());
    return exit_code_for(err.code());
  } catch (const std::exception& err) {
    fmt::print(stderr, "error: {}\n", err.what());
    return kExitValidation;
  }
  return kExitValidation;
}

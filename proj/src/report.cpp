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

#include "seprand/report.hpp"

#include <map>
#include <optional>
#include <set>

#include <fmt/format.h>

#include "seprand/analysis.hpp"
#include "seprand/error.hpp"
#include "seprand/search.hpp"

namespace seprand {
namespace {

struct RunSummary {
  std::string task;
  std::string strategy;
  std::uint64_t seed = 0;
  ScoreRecord best;
  std::optional<ScoreRecord> test;
  std::vector<ScoreRecord> records;
  bool complete = false;
};

struct BaselineSummary {
  std::string text;
  std::optional<ScoreRecord> train;
  std::optional<ScoreRecord> test;
};

std::string manifest_string(const RunLog& log, const char* key) {
  const auto& m = log.manifest;
  if (!m.contains(key) || !m[key].is_string()) {
    throw Error(ErrorCode::kParse,
                fmt::format("run log manifest lacks '{}'", key));
  }
  return m[key].get<std::string>();
}

std::string pct(double accuracy) {
  return fmt::format("{:.1f}", round_half_up(100.0 * accuracy, 1));
}

constexpr Strategy kMethodOrder[] = {
    Strategy::kOpro, Strategy::kOproIcl, Strategy::kRandomVocabulary,
    Strategy::kRandomNoContext, Strategy::kRandomWithContext};

}  // namespace

Report build_report(const std::vector<RunLog>& runs,
                    const std::vector<RunLog>& baselines) {
  std::vector<RunSummary> summaries;
  Json skipped = Json::array();
  for (const auto& log : runs) {
    RunSummary s;
    s.task = manifest_string(log, "task");
    s.strategy = manifest_string(log, "strategy");
    s.seed = log.manifest.value("seed", std::uint64_t{0});
    s.complete = log.complete();
    if (log.records.empty()) {
      skipped.push_back({{"task", s.task}, {"strategy", s.strategy},
                         {"seed", s.seed}, {"reason", "no records"}});
      continue;
    }
    s.records = log.records;
    s.best = select_best(log.records);
    for (const auto& t : log.test_evals) {
      if (t.split != Split::kTest) continue;
      if (!s.test || t.separator.text == s.best.separator.text) s.test = t;
    }
    summaries.push_back(std::move(s));
  }

  std::map<std::string, BaselineSummary> base;
  for (const auto& log : baselines) {
    auto& b = base[manifest_string(log, "task")];
    auto consider = [&b](const ScoreRecord& r) {
      b.text = r.separator.text;
      auto& slot = r.split == Split::kTrain ? b.train : b.test;
      if (!slot) slot = r;
    };
    for (const auto& r : log.records) consider(r);
    for (const auto& r : log.test_evals) consider(r);
  }

  std::set<std::string> task_set;
  std::set<std::string> strategy_set;
  for (const auto& s : summaries) {
    task_set.insert(s.task);
    strategy_set.insert(s.strategy);
  }
  const std::vector<std::string> tasks(task_set.begin(), task_set.end());

  bool use_test = !summaries.empty();
  for (const auto& s : summaries) use_test = use_test && s.test.has_value();
  for (const auto& t : tasks) {
    auto it = base.find(t);
    if (it != base.end()) use_test = use_test && it->second.test.has_value();
  }
  const std::string metric = use_test ? "test" : "train";

  // method -> task -> accuracies over seeds
  std::vector<std::string> methods;
  std::map<std::string, std::map<std::string, std::vector<double>>> cells;
  std::string baseline_label;
  for (const auto& t : tasks) {
    auto it = base.find(t);
    if (it == base.end()) continue;
    const auto& rec = use_test ? it->second.test : it->second.train;
    if (!rec) continue;
    baseline_label = fmt::format("`{}`", it->second.text);
    cells[baseline_label][t].push_back(rec->accuracy());
  }
  if (!baseline_label.empty()) methods.push_back(baseline_label);
  for (auto strategy : kMethodOrder) {
    const auto name = std::string(to_string(strategy));
    if (!strategy_set.contains(name)) continue;
    methods.push_back(name);
    for (const auto& s : summaries) {
      if (s.strategy != name) continue;
      cells[name][s.task].push_back(use_test ? s.test->accuracy()
                                             : s.best.accuracy());
    }
  }

  Json table = Json::array();
  std::optional<double> baseline_avg;
  std::string md = "# seprand report\n\n";
  md += fmt::format(
      "Accuracy metric: {} split. Each search contributes its best "
      "training-set separator; cells average over seeds; Avg. is the "
      "unweighted mean over tasks.\n\n",
      metric);
  md += "| Method |";
  for (const auto& t : tasks) md += fmt::format(" {} |", t);
  md += " Avg. (Rel. Δ%) |\n|---|";
  for (std::size_t i = 0; i <= tasks.size(); ++i) md += "---|";
  md += "\n";
  for (const auto& method : methods) {
    md += fmt::format("| {} |", method);
    Json row{{"method", method}, {"cells", Json::object()}};
    std::vector<double> per_task;
    for (const auto& t : tasks) {
      const auto& values = cells[method][t];
      if (values.empty()) {
        md += " - |";
        continue;
      }
      const double v = round_half_up(100.0 * mean(values), 1);
      per_task.push_back(v);
      row["cells"][t] = {{"accuracy", v}, {"n_runs", values.size()}};
      md += fmt::format(" {:.1f} |", v);
    }
    if (per_task.size() == tasks.size() && !tasks.empty()) {
      const double avg = round_half_up(mean(per_task), 1);
      row["avg"] = avg;
      if (method == baseline_label) baseline_avg = avg;
      if (baseline_avg && *baseline_avg > 0) {
        const double rel = relative_improvement(avg, *baseline_avg);
        row["rel_delta_pct"] = rel;
        md += fmt::format(" {:.1f} ({:.1f}) |\n", avg, rel);
      } else {
        md += fmt::format(" {:.1f} |\n", avg);
      }
    } else {
      md += " - |\n";
    }
    table.push_back(row);
  }

  md += "\n## Effective separators\n\n"
        "Share of searched separators whose training accuracy is strictly "
        "above the baseline's training accuracy (training-split records, "
        "pooled over seeds).\n\n| Method |";
  for (const auto& t : tasks) md += fmt::format(" {} |", t);
  md += "\n|---|";
  for (std::size_t i = 0; i < tasks.size(); ++i) md += "---|";
  md += "\n";
  Json ratios = Json::array();
  for (auto strategy : kMethodOrder) {
    const auto name = std::string(to_string(strategy));
    if (!strategy_set.contains(name)) continue;
    md += fmt::format("| {} |", name);
    for (const auto& t : tasks) {
      auto it = base.find(t);
      std::vector<ScoreRecord> pooled;
      for (const auto& s : summaries) {
        if (s.strategy == name && s.task == t) {
          pooled.insert(pooled.end(), s.records.begin(), s.records.end());
        }
      }
      if (pooled.empty() || it == base.end() || !it->second.train) {
        md += " - |";
        continue;
      }
      const double ratio = effective_ratio(pooled, *it->second.train);
      ratios.push_back({{"strategy", name},
                        {"task", t},
                        {"ratio", ratio},
                        {"n_records", pooled.size()},
                        {"baseline_accuracy", it->second.train->accuracy()}});
      md += fmt::format(" {}% |", pct(ratio));
    }
    md += "\n";
  }

  Json run_rows = Json::array();
  md += "\n## Runs\n\n| Task | Strategy | Seed | Records | Best separator | "
        "Train | Test | Status |\n|---|---|---|---|---|---|---|---|\n";
  for (const auto& s : summaries) {
    Json row{{"task", s.task},
             {"strategy", s.strategy},
             {"seed", s.seed},
             {"n_records", s.records.size()},
             {"best_separator", s.best.separator.text},
             {"best_train_accuracy", s.best.accuracy()},
             {"complete", s.complete}};
    if (s.test) row["test_accuracy"] = s.test->accuracy();
    run_rows.push_back(row);
    md += fmt::format("| {} | {} | {} | {} | `{}` | {} | {} | {} |\n", s.task,
                      s.strategy, s.seed, s.records.size(),
                      s.best.separator.text, pct(s.best.accuracy()),
                      s.test ? pct(s.test->accuracy()) : std::string("-"),
                      s.complete ? "complete" : "incomplete");
  }

  Report report;
  report.markdown = std::move(md);
  report.json = Json{{"metric", metric},
                     {"tasks", tasks},
                     {"table", table},
                     {"effective_ratios", ratios},
                     {"runs", run_rows},
                     {"skipped_runs", skipped}};
  return report;
}

}  // namespace seprand

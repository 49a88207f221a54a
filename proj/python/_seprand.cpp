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


// Python bindings. Structured values cross the boundary as JSON text; the
// seprand package decodes them.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "seprand/analysis.hpp"
#include "seprand/backend.hpp"
#include "seprand/error.hpp"
#include "seprand/ingest.hpp"
#include "seprand/meta_prompts.hpp"
#include "seprand/rng.hpp"
#include "seprand/run_log.hpp"
#include "seprand/search.hpp"
#include "seprand/serialize.hpp"
#include "seprand/strategies.hpp"

namespace py = pybind11;
using namespace seprand;

namespace {

std::vector<ScoreRecord> records_from(const std::string& json) {
  return parse_json(json, "records").get<std::vector<ScoreRecord>>();
}

std::string search_json(const std::filesystem::path& task_dir,
                        const std::string& strategy, std::uint32_t budget,
                        std::uint64_t seed, std::uint32_t n_train,
                        int context_shots, const std::string& backend_endpoint,
                        std::uint32_t opro_per_step) {
  SearchConfig config;
  config.strategy = parse_strategy(strategy);
  config.budget = budget;
  config.seed = seed;
  config.n_train = n_train;
  if (is_opro_strategy(config.strategy)) {
    config.opro_per_step = opro_per_step;
    config.opro_steps = opro_per_step == 0 ? 0 : budget / opro_per_step;
  }
  auto [task, context] = load_task(task_dir, n_train, seed, context_shots);
  BackendSpec spec;
  spec.endpoint = backend_endpoint;
  if (!spec.is_mock()) spec.model_name.clear();
  auto backend = make_backend(spec);
  Vocabulary vocab;
  if (config.strategy == Strategy::kRandomVocabulary) {
    vocab = load_vocabulary(*backend);
  }
  SearchInputs in{config, &task, &context, backend.get(),
                  config.strategy == Strategy::kRandomVocabulary ? &vocab
                                                                 : nullptr};
  std::string reason;
  SearchResult result;
  {
    py::gil_scoped_release release;
    result = run_search(in, nullptr, &reason);
  }
  Json out{{"records", result.records},
           {"curve", result.curve},
           {"complete", result.complete},
           {"config_digest", result.config_digest}};
  if (!result.records.empty()) out["best"] = result.best;
  if (!reason.empty()) out["abort_reason"] = reason;
  return out.dump();
}

}  // namespace

PYBIND11_MODULE(_seprand, m) {
  m.doc() = "seprand core bindings";

  static py::exception<Error> error(m, "SeprandError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(error_code_name(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("fnv1a64", [](const py::bytes& data) {
    return Fnv1a64().update(std::string(data)).digest();
  });
  m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("index"));
  m.def("mock_logprob", &hash_mock_logprob, py::arg("prompt"),
        py::arg("continuation"));
  m.def("mock_vocabulary_json", [] {
    MockBackend mock;
    return Json(mock.vocabulary()).dump();
  });
  m.def(
      "sample_random_vocabulary",
      [](std::vector<std::string> tokens, std::set<std::size_t> special,
         std::uint64_t seed, std::uint32_t max_tokens, std::uint32_t max_chars) {
        Vocabulary vocab{std::move(tokens), std::move(special)};
        return sample_random_vocabulary(vocab, seed, {max_tokens, max_chars})
            .text;
      },
      py::arg("tokens"), py::arg("special"), py::arg("seed"),
      py::arg("max_tokens") = 8, py::arg("max_chars") = 64);

  m.def("relative_improvement", &relative_improvement, py::arg("score"),
        py::arg("baseline"));
  m.def("round_half_up", &round_half_up, py::arg("value"),
        py::arg("decimals"));
  m.def(
      "classify_transfer",
      [](double ratio, double moderate, double high) {
        return std::string(to_string(classify_transfer(ratio, moderate, high)));
      },
      py::arg("ratio"), py::arg("moderate") = 0.8, py::arg("high") = 0.9);
  m.def(
      "effective_ratio_json",
      [](const std::string& records, const std::string& baseline) {
        return effective_ratio(
            records_from(records),
            parse_json(baseline, "baseline").get<ScoreRecord>());
      },
      py::arg("records"), py::arg("baseline"));
  m.def(
      "select_best_json",
      [](const std::string& records) {
        return Json(select_best(records_from(records))).dump();
      },
      py::arg("records"));
  m.def(
      "curve_json",
      [](const std::string& records) {
        return Json(best_so_far_curve(records_from(records))).dump();
      },
      py::arg("records"));

  m.def(
      "context_meta_prompt",
      [](const std::filesystem::path& task_dir, std::uint64_t seed) {
        const auto task = load_task_files(task_dir);
        return build_context_meta_prompt(draw_context_examples(task, seed),
                                         task);
      },
      py::arg("task_dir"), py::arg("seed"));
  m.def(
      "load_task_json",
      [](const std::filesystem::path& task_dir, std::uint32_t n_train,
         std::uint64_t seed, int context_shots) {
        auto [task, context] = load_task(task_dir, n_train, seed, context_shots);
        Json j = task_header_to_json(task);
        j["train"] = task.train;
        j["test"] = task.test;
        j["context"] = context.examples;
        return j.dump();
      },
      py::arg("task_dir"), py::arg("n_train"), py::arg("seed"),
      py::arg("context_shots") = 1);
  m.def("read_run_log_json", [](const std::filesystem::path& path) {
    const auto log = read_run_log(path);
    return Json{{"manifest", log.manifest},
                {"records", log.records},
                {"test_evals", log.test_evals},
                {"status", log.status}}
        .dump();
  });
  m.def("search_json", &search_json, py::arg("task_dir"), py::arg("strategy"),
        py::arg("budget"), py::arg("seed") = 0, py::arg("n_train") = 64,
        py::arg("context_shots") = 1, py::arg("backend") = "mock",
        py::arg("opro_per_step") = 4);
}

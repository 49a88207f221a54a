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
/// Aggregate reports over finished run logs: a method x task accuracy table
/// with an unweighted average and its relative change against the baseline
/// row, plus per-run effective-separator ratios.

#ifndef SEPRAND_REPORT_HPP_
#define SEPRAND_REPORT_HPP_

#include <string>
#include <vector>

#include "seprand/run_log.hpp"
#include "seprand/serialize.hpp"

namespace seprand {

struct Report {
  std::string markdown;
  Json json;
};

/// `runs` are search logs; `baselines` hold fixed-separator evaluations
/// (seprand eval output), matched to runs by task name.
Report build_report(const std::vector<RunLog>& runs,
                    const std::vector<RunLog>& baselines);

}  // namespace seprand

#endif  // SEPRAND_REPORT_HPP_

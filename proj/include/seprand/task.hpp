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

#ifndef SEPRAND_TASK_HPP_
#define SEPRAND_TASK_HPP_

#include <string>
#include <vector>

#include "seprand/types.hpp"

namespace seprand {

/// Checks every TaskSpec invariant. Each entry reads "field: rule".
/// An empty result means the task is well formed.
std::vector<std::string> validate_task(const TaskSpec& task);

/// Placeholder rules alone, for templates supplied outside a task.
std::vector<std::string> validate_template(const PromptTemplate& tmpl);

/// Throws kInvalidArgument listing all violations, if any.
void require_valid_task(const TaskSpec& task);

}  // namespace seprand

#endif  // SEPRAND_TASK_HPP_

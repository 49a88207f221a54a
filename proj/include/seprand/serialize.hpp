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
/// Canonical JSON forms of the domain types. Task examples and run-log
/// records are one JSON object per line; configs are flat objects.

#ifndef SEPRAND_SERIALIZE_HPP_
#define SEPRAND_SERIALIZE_HPP_

#include <string>

#include <nlohmann/json.hpp>

#include "seprand/types.hpp"

namespace seprand {

using Json = nlohmann::json;

// nlohmann ADL hooks. from_json throws seprand::Error(kParse) on malformed
// input rather than nlohmann's own exception types.
void to_json(Json& j, const Example& v);
void from_json(const Json& j, Example& v);
void to_json(Json& j, const Label& v);
void from_json(const Json& j, Label& v);
void to_json(Json& j, const PromptTemplate& v);
void from_json(const Json& j, PromptTemplate& v);
void to_json(Json& j, const Separator& v);
void from_json(const Json& j, Separator& v);
void to_json(Json& j, const Prediction& v);
void from_json(const Json& j, Prediction& v);
void to_json(Json& j, const ScoreRecord& v);
void from_json(const Json& j, ScoreRecord& v);
void to_json(Json& j, const SearchConfig& v);
void from_json(const Json& j, SearchConfig& v);
void to_json(Json& j, const Vocabulary& v);
void from_json(const Json& j, Vocabulary& v);
void to_json(Json& j, const CurvePoint& v);
void from_json(const Json& j, CurvePoint& v);

/// Task header document: name, kind, labels, template overrides and
/// context_shots. Examples live in the JSONL split files.
Json task_header_to_json(const TaskSpec& task);
/// Fills the header fields of `task`; template keys absent from `j` keep
/// their defaults.
void apply_task_header(const Json& j, TaskSpec& task);

/// Compact single-line dump with stable key order.
std::string dump_line(const Json& j);

/// Parses one JSON document; kParse with `where` in the message on failure.
Json parse_json(std::string_view text, std::string_view where);

/// FNV-1a 64 of the compact dump, as 16 hex digits.
std::string digest(const Json& j);

}  // namespace seprand

#endif  // SEPRAND_SERIALIZE_HPP_

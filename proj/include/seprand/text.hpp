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

#ifndef SEPRAND_TEXT_HPP_
#define SEPRAND_TEXT_HPP_

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace seprand {

/// Strips ASCII whitespace from both ends.
std::string_view trim(std::string_view text);

std::size_t count_occurrences(std::string_view haystack,
                              std::string_view needle);

using Substitution = std::pair<std::string_view, std::string_view>;

/// Replaces `{name}` placeholders in a single left-to-right pass. Substituted
/// values are never rescanned, so braces inside them survive verbatim.
/// Unknown placeholders are copied through unchanged.
std::string render_format(std::string_view format,
                          std::initializer_list<Substitution> values);

/// Number of UTF-8 code points; invalid lead bytes count as one each.
std::size_t utf8_length(std::string_view text);

/// Longest prefix holding at most `max_chars` code points.
std::string_view utf8_truncate(std::string_view text, std::size_t max_chars);

/// Cuts `text` at the earliest occurrence of any stop string.
/// Returns true when a stop string was found.
bool truncate_at_stop(std::string& text, const std::vector<std::string>& stop);

}  // namespace seprand

#endif  // SEPRAND_TEXT_HPP_

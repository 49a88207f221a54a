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

#include "seprand/text.hpp"

#include <gtest/gtest.h>

namespace seprand {
namespace {

TEST(TrimTest, StripsAsciiWhitespaceOnly) {
  EXPECT_EQ(trim("  a b \n\t"), "a b");
  EXPECT_EQ(trim("\n\n"), "");
  EXPECT_EQ(trim("\xC2\xA0x"), "\xC2\xA0x");
}

TEST(RenderFormatTest, SinglePass) {
  EXPECT_EQ(render_format("{input} {separator}", {{"input", "{separator}"},
                                                  {"separator", "S"}}),
            "{separator} S");
}

TEST(RenderFormatTest, UnknownPlaceholdersKept) {
  EXPECT_EQ(render_format("{a}{b}{", {{"a", "1"}}), "1{b}{");
}

TEST(Utf8Test, TruncatesOnCodePoints) {
  const std::string s = "a\xC4\xA0" "b\xE2\x96\x81" "c";
  EXPECT_EQ(utf8_length(s), 5u);
  EXPECT_EQ(utf8_truncate(s, 2), "a\xC4\xA0");
  EXPECT_EQ(utf8_truncate(s, 4), "a\xC4\xA0" "b\xE2\x96\x81");
  EXPECT_EQ(utf8_truncate(s, 99), s);
}

TEST(TruncateAtStopTest, EarliestStopWins) {
  std::string text = "one\ntwo. three";
  EXPECT_TRUE(truncate_at_stop(text, {".", "\n"}));
  EXPECT_EQ(text, "one");
  std::string untouched = "abc";
  EXPECT_FALSE(truncate_at_stop(untouched, {"\n", ""}));
  EXPECT_EQ(untouched, "abc");
}

TEST(CountOccurrencesTest, NonOverlapping) {
  EXPECT_EQ(count_occurrences("aaaa", "aa"), 2u);
  EXPECT_EQ(count_occurrences("{input} {input}", "{input}"), 2u);
  EXPECT_EQ(count_occurrences("x", ""), 0u);
}

}  // namespace
}  // namespace seprand

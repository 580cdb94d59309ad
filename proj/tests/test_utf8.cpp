// Copyright (c) 2026 The corpusforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "corpusforge/utf8.hpp"

#include "doctest.h"

namespace utf8 = corpusforge::utf8;

TEST_CASE("decode replaces invalid bytes") {
  const auto cps = utf8::decode_lossy("a\xff" "b");
  REQUIRE(cps.size() == 3);
  CHECK(cps[1] == utf8::kReplacement);
  CHECK(utf8::sanitize("\xc3") == "\xef\xbf\xbd");
  // Overlong encoding of '/'.
  CHECK(utf8::decode_lossy("\xc0\xaf").find(U'/') == std::u32string::npos);
}

TEST_CASE("encode and decode round trip") {
  const std::string s = "Příliš žluťoučký kůň úpěl ďábelské ódy 😀";
  CHECK(utf8::encode(utf8::decode_lossy(s)) == s);
  CHECK(utf8::length(s) == 40);
}

TEST_CASE("lowercase uses Unicode mapping") {
  CHECK(utf8::to_lower("UŽ JDU.") == "už jdu.");
  CHECK(utf8::to_lower("ŘÍJEN ĎÁBEL") == "říjen ďábel");
  CHECK(utf8::to_lower(U'Σ') == U'σ');
}

TEST_CASE("character classes") {
  CHECK(utf8::is_space(U' '));
  CHECK(utf8::is_space(U'\t'));
  CHECK(utf8::is_punct(U'.'));
  CHECK(utf8::is_punct(U'„'));
  CHECK_FALSE(utf8::is_punct(U'ř'));
  CHECK(utf8::is_alnum(U'ž'));
}

TEST_CASE("word splitting and whitespace collapse") {
  const auto words = utf8::split_words("  jedna\tdvě tři  ");
  REQUIRE(words.size() == 3);
  CHECK(words[1] == "dvě");
  CHECK(utf8::collapse_whitespace(" a \t  b\n") == "a b");
  CHECK(utf8::split_words("").empty());
  for (const char* text : {"", "  ", "a", " a b ", "jedna\u00a0dvě\ttři", "x\n\ny"}) {
    CHECK(utf8::count_words(text) == utf8::split_words(text).size());
  }
}

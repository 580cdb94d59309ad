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


#include "corpusforge/transcriptqc.hpp"

#include <functional>
#include <map>
#include <random>

#include "corpusforge/utf8.hpp"
#include "doctest.h"

using namespace corpusforge;
using namespace corpusforge::transcript;

namespace {

// Plain recursive definition with memoization.
std::size_t levenshtein_oracle(const std::u32string& a, const std::u32string& b) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> memo;
  std::function<std::size_t(std::size_t, std::size_t)> d = [&](std::size_t i, std::size_t j) {
    if (i == 0) return j;
    if (j == 0) return i;
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    const std::size_t best = std::min({d(i - 1, j) + 1, d(i, j - 1) + 1,
                                       d(i - 1, j - 1) + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    memo[{i, j}] = best;
    return best;
  };
  return d(a.size(), b.size());
}

std::u32string random_text(std::mt19937& rng, std::size_t max_len) {
  static const std::u32string alphabet = U"abcřžšěů áéí.,?😀ΣЖ ";
  std::uniform_int_distribution<std::size_t> len(0, max_len);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::u32string s(len(rng), U' ');
  for (auto& c : s) c = alphabet[pick(rng)];
  return s;
}

}  // namespace

TEST_CASE("character error rate examples") {
  CHECK(char_error_rate("abc", "abc") == 0.0);
  CHECK(char_error_rate("", "ab") == 1.0);
  CHECK(char_error_rate("sitting", "kitten") == 0.5);
  CHECK(char_error_rate("kůň", "kun") == doctest::Approx(2.0 / 3.0));
  CHECK(char_error_rate("a b", "ab") == 0.5);
  CHECK(char_error_rate("abcdef", "a") == 5.0);
  CHECK_THROWS_AS(char_error_rate("abc", ""), TranscriptError);
}

TEST_CASE("edit distance matches the recursive definition") {
  std::mt19937 rng(2024);
  for (int i = 0; i < 300; ++i) {
    const auto a = random_text(rng, 12), b = random_text(rng, 12);
    CHECK(edit_distance(a, b) == levenshtein_oracle(a, b));
    CHECK(edit_distance(a, b) == edit_distance(b, a));
    CHECK(edit_distance(a, a) == 0);
  }
}

TEST_CASE("edit distance obeys the triangle inequality") {
  std::mt19937 rng(99);
  for (int i = 0; i < 500; ++i) {
    const auto a = random_text(rng, 15), b = random_text(rng, 15), c = random_text(rng, 15);
    CHECK(edit_distance(a, c) <= edit_distance(a, b) + edit_distance(b, c));
  }
}

TEST_CASE("cer ratio uses the reference length") {
  CHECK(char_error_rate("ab", "abcd") == 0.5);
  CHECK(char_error_rate("abcd", "ab") == 1.0);
}

TEST_CASE("normalization for cer") {
  CHECK(normalize_for_cer("Dobrý den, jak se máte?") == "dobrý den jak se máte");
  CHECK(normalize_for_cer("  A  -  B ") == "a b");
  CHECK(normalize_for_cer("Ano [smích] souhlasím.") == "ano souhlasím");
  CHECK(validation_cer("dobrý den", "Dobrý den.") == 0.0);
}

TEST_CASE("transcript normalization") {
  CHECK(normalize_transcript("Ano [smích] souhlasím.") == "ano souhlasím.");
  CHECK(normalize_transcript("UŽ JDU.") == "už jdu.");
  CHECK(normalize_transcript("") == "");
  CHECK(normalize_transcript("<noise> (kašel) Tak  jo.") == "tak jo.");
  CHECK(normalize_transcript("Tak jo [smích].") == "tak jo.");
  CHECK(normalize_transcript("[ruch]") == "");
  CHECK(normalize_transcript("a(b)c.") == "a(b)c.");
  EventMarkers braces;
  braces.pairs = {{U'{', U'}'}};
  CHECK(normalize_transcript("Ahoj {šum} [x].", braces) == "ahoj [x].");
}

TEST_CASE("transcript normalization is idempotent") {
  std::mt19937 rng(5);
  const std::vector<std::string> tokens = {"Ano", "[smích]", "<šum>", "(kašel).", "UŽ", "jdu.",
                                           "  ", "Řekl", "[x]!", "a(b)", "ne?"};
  std::uniform_int_distribution<std::size_t> pick(0, tokens.size() - 1);
  for (int i = 0; i < 500; ++i) {
    std::string text;
    for (int k = 0; k < 8; ++k) text += tokens[pick(rng)] + " ";
    const auto once = normalize_transcript(text);
    CHECK(normalize_transcript(once) == once);
  }
}

TEST_CASE("terminal punctuation") {
  CHECK(ensure_terminal_punct("kolik je hodin?") == "kolik je hodin?");
  CHECK(ensure_terminal_punct("dobrý den") == "dobrý den.");
  CHECK(ensure_terminal_punct("   ") == ".");
  CHECK(ensure_terminal_punct("hotovo!  ") == "hotovo!  ");
  CHECK(ensure_terminal_punct("konec  ") == "konec.");
  std::mt19937 rng(8);
  for (int i = 0; i < 200; ++i) {
    const auto s = utf8::encode(random_text(rng, 10));
    CHECK(ends_with_terminal(ensure_terminal_punct(s)));
  }
}

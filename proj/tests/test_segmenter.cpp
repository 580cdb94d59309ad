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


#include "corpusforge/segmenter.hpp"

#include <random>

#include "corpusforge/audioqc.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corpusforge;
using namespace corpusforge::segment;

namespace {

WordList timed(const std::vector<std::pair<double, double>>& spans,
               const std::vector<std::string>& tokens = {}) {
  WordList out;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    WordAlignment w;
    w.word = i < tokens.size() ? tokens[i] : "w" + std::to_string(i);
    w.start_s = spans[i].first;
    w.end_s = spans[i].second;
    const char last = w.word.back();
    w.terminal_after = last == '.' || last == '?' || last == '!';
    out.push_back(w);
  }
  return out;
}

// Words every `step` seconds, each lasting `len`, from `from` up to `to`.
WordList steady(double from, double to, double step, double len, const std::string& token) {
  std::vector<std::pair<double, double>> spans;
  for (double t = from; t + len <= to + 1e-9; t += step) spans.emplace_back(t, t + len);
  return timed(spans, std::vector<std::string>(spans.size(), token));
}

}  // namespace

TEST_CASE("pause scores") {
  const auto words = timed({{0.0, 0.5}, {1.3, 2.0}, {2.8, 3.0}}, {"ahoj", "konec.", "dál"});
  const auto cuts = score_pauses(words, 2.0);
  REQUIRE(cuts.size() == 2);
  CHECK(cuts[0].duration_s == doctest::Approx(0.8));
  CHECK(cuts[0].score == doctest::Approx(0.8));
  CHECK_FALSE(cuts[0].terminal);
  CHECK(cuts[1].terminal);
  CHECK(cuts[1].score == doctest::Approx(2.8));
  CHECK_THROWS_AS(score_pauses(timed({{0.0, 1.0}}), 2.0), SegmentError);
  CHECK_THROWS_AS(score_pauses(timed({{0.0, 1.0}, {0.5, 2.0}}), 2.0), SegmentError);
  CHECK_THROWS_AS(score_pauses(timed({{1.0, 0.5}, {2.0, 3.0}}), 2.0), SegmentError);
}

TEST_CASE("short recording stays whole") {
  const auto words = steady(0.0, 12.0, 0.5, 0.3, "slovo");
  const auto segs = optimal_segmentation(words, score_pauses(words), 12.5);
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].first_word == 0);
  CHECK(segs[0].last_word == words.size() - 1);
}

TEST_CASE("long recording is cut at its one long terminal pause") {
  WordList words = steady(0.0, 22.0, 0.5, 0.4, "slovo");
  words.back().word = "konec.";
  words.back().terminal_after = true;
  // The pause after the last word before 22 s lasts 1.5 s.
  const double resume = words.back().end_s + 1.5;
  for (const auto& w : steady(resume, 45.0, 0.5, 0.4, "slovo")) words.push_back(w);
  const auto cuts = score_pauses(words);
  const std::size_t expected = static_cast<std::size_t>(std::find_if(words.begin(), words.end(),
      [](const WordAlignment& w) { return w.terminal_after; }) - words.begin());
  const auto chosen = choose_cuts(words, cuts);
  CHECK(chosen.cuts == std::vector<std::size_t>{expected});
  const auto segs = optimal_segmentation(words, cuts, 45.5);
  REQUIRE(segs.size() == 2);
  for (const auto& s : segs) CHECK(s.end_s - s.start_s <= 30.0);
}

TEST_CASE("dynamic programme equals exhaustive search") {
  std::mt19937 rng(31337);
  SegmentationOptions opts;
  opts.max_len_s = 10.0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(trial % 14);
    const auto words = cftest::random_words(rng, n, trial % 2 == 0);
    const auto cuts = score_pauses(words, 2.0);
    const auto got = choose_cuts(words, cuts, opts);
    const auto want = cftest::brute_force_cuts(words, cuts, opts);
    INFO("trial " << trial);
    CHECK(got.objective == want.objective);
    CHECK(got.cuts == want.cuts);
    CHECK(cut_objective(cuts, got.cuts, opts.cut_penalty) == got.objective);

    const auto segs = make_segments(words, got.cuts, words.back().end_s + 0.7, opts);
    std::size_t next = 0;
    for (const auto& s : segs) {
      CHECK(s.first_word == next);
      CHECK(s.last_word >= s.first_word);
      CHECK(s.end_s - s.start_s <= opts.max_len_s);
      CHECK(s.start_s <= words[s.first_word].start_s);
      CHECK(s.end_s >= words[s.last_word].end_s);
      next = s.last_word + 1;
    }
    CHECK(next == n);
    // Determinism.
    CHECK(choose_cuts(words, cuts, opts).cuts == got.cuts);
  }
}

TEST_CASE("raising the terminal bonus never loses terminal cuts") {
  std::mt19937 rng(4);
  SegmentationOptions opts;
  opts.max_len_s = 12.0;
  auto terminal_cuts = [](const WordList& words, const Segmentation& s) {
    std::size_t n = 0;
    for (std::size_t c : s.cuts) n += words[c].terminal_after ? 1 : 0;
    return n;
  };
  for (int trial = 0; trial < 150; ++trial) {
    const auto words = cftest::random_words(rng, 4 + trial % 10, false);
    std::size_t prev = 0;
    for (double beta : {0.0, 0.5, 1.0, 2.0, 4.0, 8.0}) {
      const auto s = choose_cuts(words, score_pauses(words, beta), opts);
      const std::size_t t = terminal_cuts(words, s);
      CHECK(t >= prev);
      prev = t;
    }
  }
}

TEST_CASE("single word longer than the limit") {
  const auto words = timed({{0.0, 1.0}, {1.5, 40.0}});
  CHECK_THROWS_AS(choose_cuts(words, score_pauses(words)), SegmentError);
  CHECK_THROWS_AS(choose_cuts({}, {}), SegmentError);
}

TEST_CASE("forced cuts when candidates are restricted") {
  // 40 s of words with 0.2 s gaps and one 0.6 s gap at 18 s; only pauses of
  // at least 1 s are candidates, so the stretch is infeasible without a
  // forced cut at its longest pause.
  WordList words = steady(0.0, 18.0, 0.5, 0.3, "a");
  const double resume = words.back().end_s + 0.6;
  for (const auto& w : steady(resume, 40.0, 0.5, 0.3, "a")) words.push_back(w);
  SegmentationOptions opts;
  opts.min_cut_pause_s = 1.0;
  const auto chosen = choose_cuts(words, score_pauses(words), opts);
  const std::size_t gap_index = static_cast<std::size_t>(
      steady(0.0, 18.0, 0.5, 0.3, "a").size() - 1);
  CHECK(chosen.cuts == std::vector<std::size_t>{gap_index});
  CHECK(chosen.objective == 0.0);
}

TEST_CASE("edge padding follows the trimming rule") {
  const auto words = timed({{1.0, 2.0}, {4.0, 5.0}, {5.1, 6.0}});
  const auto segs = make_segments(words, {0}, 9.0);
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].start_s == doctest::Approx(0.75));
  CHECK(segs[0].end_s == doctest::Approx(2.25));
  CHECK(segs[1].start_s == doctest::Approx(3.75));
  CHECK(segs[1].end_s == doctest::Approx(6.25));
  // Narrow pauses are split in half.
  const auto tight = make_segments(words, {1}, 9.0);
  CHECK(tight[0].end_s == doctest::Approx(5.05));
  CHECK(tight[1].start_s == doctest::Approx(5.05));
}

TEST_CASE("slicing") {
  const auto audio = cftest::noisy_speech(30.0, 10.0, 1);
  const auto words = timed({{1.3, 2.0}, {2.5, 3.1}, {5.0, 6.0}, {6.2, 8.0}},
                           {"Jedna", "dvě.", "Tři", "čtyři."});
  SUBCASE("one segment equals trimming") {
    const auto segs = make_segments(words, {}, audio.duration_s());
    const auto sliced = slice_record(audio, words, segs);
    REQUIRE(sliced.size() == 1);
    CHECK(sliced[0].audio.samples == audioqc::trim_to_alignment(audio, words).samples);
    CHECK(sliced[0].transcript == "Jedna dvě. Tři čtyři.");
  }
  SUBCASE("pieces never add up to more than the whole") {
    const auto segs = make_segments(words, {1}, audio.duration_s());
    const auto sliced = slice_record(audio, words, segs);
    REQUIRE(sliced.size() == 2);
    CHECK(sliced[0].audio.duration_s() + sliced[1].audio.duration_s() <= audio.duration_s());
    CHECK(sliced[1].words.front().start_s == doctest::Approx(0.25).epsilon(1e-3));
  }
  SUBCASE("two cuts: transcripts concatenate to the full text") {
    const auto segs = make_segments(words, {0, 2}, audio.duration_s());
    const auto sliced = slice_record(audio, words, segs);
    REQUIRE(sliced.size() == 3);
    std::string joined;
    for (const auto& s : sliced) joined += (joined.empty() ? "" : " ") + s.transcript;
    CHECK(joined == "Jedna dvě. Tři čtyři.");
  }
}

TEST_CASE("punctuation restored onto words") {
  const auto words = timed({{0.0, 1.0}, {1.5, 2.0}}, {"dobrý", "den"});
  const auto out = apply_punctuation(words, "Dobrý den.");
  CHECK(out[0].word == "Dobrý");
  CHECK_FALSE(out[0].terminal_after);
  CHECK(out[1].terminal_after);
  CHECK(out[1].start_s == 1.5);
  CHECK_THROWS_AS(apply_punctuation(words, "Dobrý den . ."), SegmentError);
}

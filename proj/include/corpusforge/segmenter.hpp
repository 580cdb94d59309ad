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

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpusforge/alignment.hpp"
#include "corpusforge/audio.hpp"
#include "corpusforge/error.hpp"

namespace corpusforge::segment {

enum class SegmentErrc { TooFewWords, InvalidAlignment, WordExceedsLmax, EmptyWords };

constexpr std::string_view to_string(SegmentErrc kind) {
  switch (kind) {
    case SegmentErrc::TooFewWords: return "TooFewWords";
    case SegmentErrc::InvalidAlignment: return "InvalidAlignment";
    case SegmentErrc::WordExceedsLmax: return "WordExceedsLmax";
    case SegmentErrc::EmptyWords: return "EmptyWords";
  }
  return "SegmentError";
}

using SegmentError = KindedError<SegmentErrc>;

/// Candidate cut after word `index` (between index and index + 1).
struct PauseCut {
  std::size_t index = 0;
  double duration_s = 0.0;
  bool terminal = false;
  double score = 0.0;
  bool forced = false;  // inserted to make a long stretch feasible; scores 0

  bool operator==(const PauseCut&) const = default;
};

struct Segment {
  std::size_t first_word = 0;
  std::size_t last_word = 0;  // inclusive
  double start_s = 0.0;       // after edge-pause capping
  double end_s = 0.0;
  std::string transcript;

  bool operator==(const Segment&) const = default;
};

struct SegmentationOptions {
  double max_len_s = 30.0;     // L_max, measured first word start to last word end
  double cut_penalty = 1.0;    // lambda, subtracted per chosen (non-forced) cut
  double max_edge_pause_s = 0.25;
  /// Pauses shorter than this are not cut candidates. With the default 0,
  /// every word boundary is a candidate and forced cuts never occur.
  double min_cut_pause_s = 0.0;
};

/// Throws InvalidAlignment unless start <= end, sorted, non-overlapping.
void validate_words(const WordList& words);

/// One cut per adjacent pair; score = pause + bonus when the left word ends a
/// sentence. Throws TooFewWords for fewer than two words.
std::vector<PauseCut> score_pauses(const WordList& words, double terminal_bonus_s = 2.0);

/// Cut positions (word indices) chosen by the DP.
struct Segmentation {
  std::vector<std::size_t> cuts;
  double objective = 0.0;
};

/// Maximizes the sum of (score - penalty) over chosen cuts subject to every
/// segment span fitting in max_len_s. Ties prefer fewer cuts, then the
/// lexicographically earliest cut list. `cuts` must come from score_pauses on
/// the same words (forced cuts are added here when candidates are sparse).
Segmentation choose_cuts(const WordList& words, const std::vector<PauseCut>& cuts,
                         const SegmentationOptions& opts = {});

/// Objective of a given cut list, summed left to right (shared with tests).
double cut_objective(const std::vector<PauseCut>& cuts, const std::vector<std::size_t>& chosen,
                     double penalty);

/// choose_cuts plus segment construction. `duration_s` bounds the padded
/// edges; pass the record duration.
std::vector<Segment> optimal_segmentation(const WordList& words,
                                          const std::vector<PauseCut>& cuts,
                                          double duration_s,
                                          const SegmentationOptions& opts = {});

/// Builds segments from explicit cut positions.
std::vector<Segment> make_segments(const WordList& words, const std::vector<std::size_t>& cuts,
                                   double duration_s, const SegmentationOptions& opts = {});

/// Sets word text and terminal_after from a punctuated rendition of the same
/// word sequence (one whitespace token per word). Throws InvalidAlignment on
/// a token count mismatch.
WordList apply_punctuation(const WordList& words, std::string_view punctuated);

/// Audio and transcript of each segment. Word timestamps in the returned
/// word lists are relative to the segment start.
struct SlicedSegment {
  AudioRecord audio;
  std::string transcript;
  WordList words;
};

std::vector<SlicedSegment> slice_record(const AudioRecord& record, const WordList& words,
                                        const std::vector<Segment>& segments);

}  // namespace corpusforge::segment

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
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpusforge/error.hpp"

namespace corpusforge::transcript {

enum class TranscriptErrc { EmptyReference };

constexpr std::string_view to_string(TranscriptErrc kind) {
  switch (kind) {
    case TranscriptErrc::EmptyReference: return "EmptyReference";
  }
  return "TranscriptError";
}

using TranscriptError = KindedError<TranscriptErrc>;

enum class Provenance { Annotated, AsrHypothesis };

struct Transcript {
  std::string text;
  Provenance provenance = Provenance::Annotated;
  std::optional<double> cer;
};

/// Unit-cost Levenshtein distance over code points.
std::size_t edit_distance(std::u32string_view a, std::u32string_view b);

/// Edit distance between the strings divided by the reference length in code
/// points. Whitespace counts. Throws EmptyReference.
double char_error_rate(std::string_view hypothesis, std::string_view reference);

/// normalize_transcript, then punctuation removed and whitespace collapsed.
/// Both sides of the validation comparison go through this.
std::string normalize_for_cer(std::string_view text);

/// char_error_rate after normalize_for_cer on both sides.
double validation_cer(std::string_view hypothesis, std::string_view reference);

/// Delimiter pairs; a whitespace token that starts with the opener and ends
/// with the closer is a non-speech event.
struct EventMarkers {
  std::vector<std::pair<char32_t, char32_t>> pairs = {{U'[', U']'}, {U'<', U'>'}, {U'(', U')'}};
};

/// Drops event tokens, collapses whitespace and lowercases. Punctuation stays;
/// punctuation glued to the end of an event ("[smích].") moves to the
/// preceding word.
std::string normalize_transcript(std::string_view text, const EventMarkers& markers = {});

inline constexpr std::u32string_view kTerminalMarks = U".?!";

bool ends_with_terminal(std::string_view text);

/// Appends "." unless the last non-whitespace character is a terminal mark.
/// Trailing whitespace is dropped when the mark is appended.
std::string ensure_terminal_punct(std::string_view text);

}  // namespace corpusforge::transcript

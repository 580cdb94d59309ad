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

#include <algorithm>
#include <numeric>

#include "corpusforge/utf8.hpp"

namespace corpusforge::transcript {

std::size_t edit_distance(std::u32string_view a, std::u32string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  std::iota(prev.begin(), prev.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({sub, prev[j] + 1, cur[j - 1] + 1});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

double char_error_rate(std::string_view hypothesis, std::string_view reference) {
  const auto ref = utf8::decode_lossy(reference);
  if (ref.empty()) throw TranscriptError(TranscriptErrc::EmptyReference, "reference is empty");
  const auto hyp = utf8::decode_lossy(hypothesis);
  return static_cast<double>(edit_distance(hyp, ref)) / static_cast<double>(ref.size());
}

std::string normalize_for_cer(std::string_view text) {
  std::u32string out;
  bool pending_space = false;
  for (char32_t cp : utf8::decode_lossy(normalize_transcript(text))) {
    if (utf8::is_space(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (utf8::is_punct(cp)) continue;
    if (pending_space) out.push_back(U' ');
    pending_space = false;
    out.push_back(cp);
  }
  return utf8::encode(out);
}

double validation_cer(std::string_view hypothesis, std::string_view reference) {
  return char_error_rate(normalize_for_cer(hypothesis), normalize_for_cer(reference));
}

std::string normalize_transcript(std::string_view text, const EventMarkers& markers) {
  std::vector<std::string> kept;
  for (const auto& token : utf8::split_words(text)) {
    auto cps = utf8::decode_lossy(token);
    // Punctuation glued after an event ("[smích].") moves to the previous word.
    std::u32string trailing;
    while (cps.size() > 2 && utf8::is_punct(cps.back()) &&
           std::none_of(markers.pairs.begin(), markers.pairs.end(),
                        [&](const auto& p) { return cps.back() == p.second; })) {
      trailing.insert(trailing.begin(), cps.back());
      cps.pop_back();
    }
    const bool is_event =
        cps.size() >= 2 && std::any_of(markers.pairs.begin(), markers.pairs.end(),
                                       [&](const auto& p) {
                                         return cps.front() == p.first && cps.back() == p.second;
                                       });
    if (!is_event) {
      kept.push_back(utf8::to_lower(token));
    } else if (!trailing.empty() && !kept.empty()) {
      kept.back() += utf8::encode(trailing);
    }
  }
  std::string out;
  for (const auto& w : kept) {
    if (!out.empty()) out.push_back(' ');
    out += w;
  }
  return out;
}

bool ends_with_terminal(std::string_view text) {
  const auto cps = utf8::decode_lossy(text);
  for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
    if (utf8::is_space(*it)) continue;
    return kTerminalMarks.find(*it) != std::u32string_view::npos;
  }
  return false;
}

std::string ensure_terminal_punct(std::string_view text) {
  if (ends_with_terminal(text)) return std::string(text);
  auto cps = utf8::decode_lossy(text);
  while (!cps.empty() && utf8::is_space(cps.back())) cps.pop_back();
  cps.push_back(U'.');
  return utf8::encode(cps);
}

}  // namespace corpusforge::transcript

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

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "corpusforge/audioqc.hpp"
#include "corpusforge/utf8.hpp"

namespace corpusforge::segment {
namespace {

struct Candidate {
  double value = 0.0;
  std::vector<std::size_t> cuts;
};

bool better(const Candidate& a, const Candidate& b) {
  if (a.value != b.value) return a.value > b.value;
  if (a.cuts.size() != b.cuts.size()) return a.cuts.size() < b.cuts.size();
  return a.cuts < b.cuts;
}

double span(const WordList& words, std::size_t first, std::size_t last) {
  return words[last].end_s - words[first].start_s;
}

}  // namespace

void validate_words(const WordList& words) {
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    if (!(w.start_s <= w.end_s) || w.start_s < 0.0) {
      throw SegmentError(SegmentErrc::InvalidAlignment,
                         "word " + std::to_string(i) + " has start after end");
    }
    if (i > 0 && w.start_s < words[i - 1].end_s) {
      throw SegmentError(SegmentErrc::InvalidAlignment,
                         "words " + std::to_string(i - 1) + " and " + std::to_string(i) +
                             " overlap or are out of order");
    }
  }
}

std::vector<PauseCut> score_pauses(const WordList& words, double terminal_bonus_s) {
  if (words.size() < 2) {
    throw SegmentError(SegmentErrc::TooFewWords, "need at least two words");
  }
  validate_words(words);
  std::vector<PauseCut> cuts;
  cuts.reserve(words.size() - 1);
  for (std::size_t i = 0; i + 1 < words.size(); ++i) {
    PauseCut c;
    c.index = i;
    c.duration_s = words[i + 1].start_s - words[i].end_s;
    c.terminal = words[i].terminal_after;
    c.score = c.duration_s + (c.terminal ? terminal_bonus_s : 0.0);
    cuts.push_back(c);
  }
  return cuts;
}

double cut_objective(const std::vector<PauseCut>& cuts, const std::vector<std::size_t>& chosen,
                     double penalty) {
  double total = 0.0;
  for (std::size_t idx : chosen) {
    const auto it = std::find_if(cuts.begin(), cuts.end(),
                                 [&](const PauseCut& c) { return c.index == idx; });
    if (it == cuts.end()) continue;
    total += it->forced ? 0.0 : it->score - penalty;
  }
  return total;
}

Segmentation choose_cuts(const WordList& words, const std::vector<PauseCut>& cuts,
                         const SegmentationOptions& opts) {
  const std::size_t n = words.size();
  if (n == 0) throw SegmentError(SegmentErrc::EmptyWords, "no words to segment");
  validate_words(words);
  for (std::size_t i = 0; i < n; ++i) {
    if (span(words, i, i) > opts.max_len_s) {
      throw SegmentError(SegmentErrc::WordExceedsLmax,
                         "word " + std::to_string(i) + " ('" + words[i].word +
                             "') is longer than the segment limit");
    }
  }

  // net[i]: value of cutting after word i, nullopt when not a candidate.
  std::vector<std::optional<double>> net(n > 0 ? n - 1 : 0);
  for (const auto& c : cuts) {
    if (c.index + 1 >= n) continue;
    if (c.forced) {
      net[c.index] = 0.0;
    } else if (c.duration_s >= opts.min_cut_pause_s) {
      net[c.index] = c.score - opts.cut_penalty;
    }
  }

  // Stretches between consecutive candidates that cannot fit get a forced,
  // zero-score candidate at their longest interior pause.
  for (bool changed = true; changed;) {
    changed = false;
    std::size_t block_start = 0;
    for (std::size_t b = 0; b < n; ++b) {
      const bool boundary = b + 1 == n || net[b].has_value();
      if (!boundary) continue;
      if (span(words, block_start, b) > opts.max_len_s) {
        std::size_t best = block_start;
        double longest = -1.0;
        for (std::size_t k = block_start; k < b; ++k) {
          const double pause = words[k + 1].start_s - words[k].end_s;
          if (pause > longest) longest = pause, best = k;
        }
        net[best] = 0.0;
        changed = true;
        break;
      }
      block_start = b + 1;
    }
  }

  // best[i]: optimum over words 0..i with a segment ending at word i.
  std::vector<std::optional<Candidate>> best(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t first = i + 1; first-- > 0;) {
      if (span(words, first, i) > opts.max_len_s) break;
      Candidate cand;
      if (first > 0) {
        const std::size_t j = first - 1;
        if (!net[j] || !best[j]) continue;
        cand = *best[j];
        cand.value += *net[j];
        cand.cuts.push_back(j);
      }
      if (!best[i] || better(cand, *best[i])) best[i] = std::move(cand);
    }
  }
  if (!best[n - 1]) {
    throw SegmentError(SegmentErrc::WordExceedsLmax, "no feasible segmentation");
  }
  return {best[n - 1]->cuts, best[n - 1]->value};
}

std::vector<Segment> make_segments(const WordList& words, const std::vector<std::size_t>& cuts,
                                   double duration_s, const SegmentationOptions& opts) {
  std::vector<Segment> out;
  std::size_t first = 0;
  auto emit = [&](std::size_t last) {
    Segment s;
    s.first_word = first;
    s.last_word = last;
    const double w0 = words[first].start_s;
    const double w1 = words[last].end_s;
    const double room_left = first == 0 ? w0 : (w0 - words[first - 1].end_s) / 2.0;
    const double room_right =
        last + 1 == words.size() ? duration_s - w1 : (words[last + 1].start_s - w1) / 2.0;
    double pad_left = std::clamp(room_left, 0.0, opts.max_edge_pause_s);
    double pad_right = std::clamp(room_right, 0.0, opts.max_edge_pause_s);
    const double excess = (w1 - w0) + pad_left + pad_right - opts.max_len_s;
    if (excess > 0.0) {
      double cut_left = std::min(pad_left, excess / 2.0);
      const double cut_right = std::min(pad_right, excess - cut_left);
      cut_left = std::min(pad_left, excess - cut_right);
      pad_left -= cut_left;
      pad_right -= cut_right;
    }
    s.start_s = std::max(0.0, w0 - pad_left);
    s.end_s = std::min(duration_s, w1 + pad_right);
    // Rounding in the padding arithmetic can overshoot the limit by an ulp.
    if (s.end_s - s.start_s > opts.max_len_s) s.end_s = std::max(w1, s.start_s + opts.max_len_s);
    if (s.end_s - s.start_s > opts.max_len_s) {
      s.start_s = w0;
      s.end_s = w1;
    }
    std::string text;
    for (std::size_t k = first; k <= last; ++k) {
      if (!text.empty()) text.push_back(' ');
      text += words[k].word;
    }
    s.transcript = std::move(text);
    out.push_back(std::move(s));
    first = last + 1;
  };
  for (std::size_t c : cuts) emit(c);
  if (!words.empty()) emit(words.size() - 1);
  return out;
}

std::vector<Segment> optimal_segmentation(const WordList& words,
                                          const std::vector<PauseCut>& cuts, double duration_s,
                                          const SegmentationOptions& opts) {
  const auto chosen = choose_cuts(words, cuts, opts);
  return make_segments(words, chosen.cuts, duration_s, opts);
}

WordList apply_punctuation(const WordList& words, std::string_view punctuated) {
  const auto tokens = utf8::split_words(punctuated);
  if (tokens.size() != words.size()) {
    throw SegmentError(SegmentErrc::InvalidAlignment,
                       "punctuated text has " + std::to_string(tokens.size()) +
                           " tokens for " + std::to_string(words.size()) + " words");
  }
  WordList out = words;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].word = tokens[i];
    const auto cps = utf8::decode_lossy(tokens[i]);
    out[i].terminal_after =
        !cps.empty() && std::u32string_view(U".?!").find(cps.back()) != std::u32string_view::npos;
  }
  return out;
}

std::vector<SlicedSegment> slice_record(const AudioRecord& record, const WordList& words,
                                        const std::vector<Segment>& segments) {
  std::vector<SlicedSegment> out;
  out.reserve(segments.size());
  for (const auto& seg : segments) {
    if (seg.last_word >= words.size() || seg.first_word > seg.last_word) {
      throw SegmentError(SegmentErrc::InvalidAlignment, "segment outside the word list");
    }
    const std::size_t a = audioqc::sample_at(record, seg.start_s);
    std::size_t b = audioqc::sample_at(record, seg.end_s);
    // Independent rounding of both edges must not stretch the segment.
    const auto nominal = static_cast<std::size_t>(
        std::max(0LL, std::llround((seg.end_s - seg.start_s) * record.sample_rate)));
    if (b > a + nominal) b = a + nominal;
    SlicedSegment s;
    s.audio = record.slice(a, b);
    s.transcript = seg.transcript;
    const double offset = static_cast<double>(a) / record.sample_rate;
    const double dur = s.audio.duration_s();
    for (std::size_t k = seg.first_word; k <= seg.last_word; ++k) {
      WordAlignment w = words[k];
      w.start_s = std::clamp(w.start_s - offset, 0.0, dur);
      w.end_s = std::clamp(w.end_s - offset, w.start_s, dur);
      s.words.push_back(std::move(w));
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace corpusforge::segment

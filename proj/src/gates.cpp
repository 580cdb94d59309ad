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


#include "corpusforge/gates.hpp"

#include "corpusforge/utf8.hpp"

namespace corpusforge::audioqc {

QualityVerdict snr_gate(double snr_db, double min_db) {
  if (snr_db < min_db) return {false, "snr"};
  return {};
}

QualityVerdict duration_gate(double duration_s, double min_s, double max_s) {
  if (duration_s < min_s) return {false, "too_short"};
  if (duration_s > max_s) return {false, "too_long"};
  return {};
}

QualityVerdict transcript_gate(std::string_view transcript) {
  if (utf8::split_words(transcript).empty()) return {false, "empty_transcript"};
  return {};
}

QualityVerdict passes_quality(const pipeline::CorpusEntry& entry,
                              const pipeline::PipelineConfig& cfg) {
  if (!entry.snr_db) return {false, "snr"};
  if (auto v = snr_gate(*entry.snr_db, cfg.snr_min_db); !v.pass) return v;
  if (auto v = duration_gate(entry.duration_s, cfg.dur_min_s, cfg.dur_max_s); !v.pass) return v;
  return transcript_gate(entry.transcript);
}

}  // namespace corpusforge::audioqc

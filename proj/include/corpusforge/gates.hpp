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

#include <string>

#include "corpusforge/config.hpp"
#include "corpusforge/manifest.hpp"

namespace corpusforge::audioqc {

struct QualityVerdict {
  bool pass = true;
  std::string reason;  // empty when passing

  bool operator==(const QualityVerdict&) const = default;
};

/// Fails below min_db; exactly min_db passes.
QualityVerdict snr_gate(double snr_db, double min_db);

/// Fails strictly below min_s ("too_short") or strictly above max_s
/// ("too_long").
QualityVerdict duration_gate(double duration_s, double min_s, double max_s);

/// Fails on a transcript that is empty or whitespace only.
QualityVerdict transcript_gate(std::string_view transcript);

/// SNR, then duration, then transcript. A missing snr_db fails the SNR gate.
QualityVerdict passes_quality(const pipeline::CorpusEntry& entry,
                              const pipeline::PipelineConfig& cfg);

}  // namespace corpusforge::audioqc

namespace corpusforge::transcript {

/// CER at or below the limit passes.
inline bool passes_cer(double cer, double cer_max) { return cer <= cer_max; }

}  // namespace corpusforge::transcript

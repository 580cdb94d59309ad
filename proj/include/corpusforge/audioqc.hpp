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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpusforge/alignment.hpp"
#include "corpusforge/audio.hpp"
#include "corpusforge/error.hpp"

namespace corpusforge::audioqc {

enum class AudioErrc { TooShort, SilentSignal, EmptyAlignment, OutOfRangeTimestamps, BadTable };

constexpr std::string_view to_string(AudioErrc kind) {
  switch (kind) {
    case AudioErrc::TooShort: return "TooShort";
    case AudioErrc::SilentSignal: return "SilentSignal";
    case AudioErrc::EmptyAlignment: return "EmptyAlignment";
    case AudioErrc::OutOfRangeTimestamps: return "OutOfRangeTimestamps";
    case AudioErrc::BadTable: return "BadTable";
  }
  return "AudioError";
}

using AudioError = KindedError<AudioErrc>;

// ---------------------------------------------------------------------------
// WADA-SNR

/// Monotone map from the amplitude statistic G to SNR in dB, one point per
/// dB from kMinSnrDb to kMaxSnrDb.
class SnrTable {
 public:
  static constexpr int kMinSnrDb = -20;
  static constexpr int kMaxSnrDb = 100;
  static constexpr std::size_t kPoints = kMaxSnrDb - kMinSnrDb + 1;
  static constexpr double kDefaultShape = 0.4;

  /// Throws AudioError(BadTable) unless `g_values` has kPoints strictly
  /// increasing entries.
  explicit SnrTable(std::vector<double> g_values);

  const std::vector<double>& g_values() const { return g_; }
  double snr_at(std::size_t i) const { return kMinSnrDb + static_cast<double>(i); }

  /// Inverse lookup: binary search plus linear interpolation, clamped to the
  /// grid ends.
  double snr_for(double g) const;

  /// Two columns per line: "snr_db G".
  void write(std::ostream& out) const;
  static SnrTable read(std::istream& in);
  void save(const std::filesystem::path& path) const;
  static SnrTable load(const std::filesystem::path& path);

  bool operator==(const SnrTable&) const = default;

 private:
  std::vector<double> g_;
};

/// G = ln(mean |z|) - mean(ln |z|) over the nonzero samples.
double amplitude_statistic(std::span<const float> samples);

/// Monte Carlo table: speech amplitudes ~ Gamma(shape) with random sign plus
/// Gaussian noise scaled to each grid SNR. Deterministic for a given seed.
/// Requires samples_per_point >= 1e6 (throws AudioError(BadTable)).
SnrTable build_snr_table(double shape = SnrTable::kDefaultShape,
                         std::size_t samples_per_point = 1'000'000,
                         std::uint64_t seed = 20240613);

/// The default table, built once on first use.
const SnrTable& default_snr_table();

inline constexpr std::size_t kMinSnrSamples = 4000;

/// Blind SNR estimate in dB, clamped to the table range.
/// Throws TooShort (< 4000 samples) or SilentSignal (all zero).
double estimate_snr_wada(const AudioRecord& record, const SnrTable& table);

// ---------------------------------------------------------------------------
// Trimming

inline constexpr double kMaxEdgePauseS = 0.25;

struct SampleSpan {
  std::size_t first = 0;
  std::size_t last = 0;  // exclusive
};

/// Sample range keeping at most `max_pause_s` before the first word and
/// after the last word. Throws EmptyAlignment or OutOfRangeTimestamps.
SampleSpan trim_span(const AudioRecord& record, const WordList& words,
                     double max_pause_s = kMaxEdgePauseS);

AudioRecord trim_to_alignment(const AudioRecord& record, const WordList& words,
                              double max_pause_s = kMaxEdgePauseS);

/// Sample index nearest to time t, clamped to [0, size].
std::size_t sample_at(const AudioRecord& record, double t);

// ---------------------------------------------------------------------------
// Energy VAD

struct VadConfig {
  double frame_ms = 25.0;
  double hop_ms = 10.0;
  double threshold_db = 6.0;       // above the noise floor
  double floor_percentile = 10.0;  // frame-energy percentile used as floor
  double hangover_ms = 200.0;
  double merge_gap_ms = 300.0;
  double min_region_ms = 250.0;
};

struct SpeechRegion {
  double start_s = 0.0;
  double end_s = 0.0;
  bool operator==(const SpeechRegion&) const = default;
};

/// Frame energies in dB (10 log10 of mean square plus 1e-12).
std::vector<double> frame_energies_db(const AudioRecord& record, const VadConfig& cfg);

/// Sorted, disjoint speech regions. Frame k covers the hop-long cell centred
/// on its analysis window. Throws TooShort when shorter than one frame.
std::vector<SpeechRegion> detect_speech_regions(const AudioRecord& record,
                                                const VadConfig& cfg = {});

}  // namespace corpusforge::audioqc

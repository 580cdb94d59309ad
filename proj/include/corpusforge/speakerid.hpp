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

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "corpusforge/audio.hpp"
#include "corpusforge/error.hpp"

namespace corpusforge::speaker {

enum class SpeakerErrc {
  TooShort,
  DimensionMismatch,
  EmptyScores,
  DegenerateInterpolation,
  ZeroVector,
  BadFile
};

constexpr std::string_view to_string(SpeakerErrc kind) {
  switch (kind) {
    case SpeakerErrc::TooShort: return "TooShort";
    case SpeakerErrc::DimensionMismatch: return "DimensionMismatch";
    case SpeakerErrc::EmptyScores: return "EmptyScores";
    case SpeakerErrc::DegenerateInterpolation: return "DegenerateInterpolation";
    case SpeakerErrc::ZeroVector: return "ZeroVector";
    case SpeakerErrc::BadFile: return "BadFile";
  }
  return "SpeakerError";
}

using SpeakerError = KindedError<SpeakerErrc>;

inline constexpr std::size_t kDefaultDim = 512;

/// Unit-norm voice-identity vector. Construction normalizes; a zero or
/// non-finite input throws ZeroVector.
class SpeakerEmbedding {
 public:
  SpeakerEmbedding() = default;
  explicit SpeakerEmbedding(std::vector<double> values, std::string model_id = "");

  const std::vector<double>& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }
  const std::string& model_id() const { return model_id_; }

  bool operator==(const SpeakerEmbedding&) const = default;

 private:
  std::vector<double> values_;
  std::string model_id_;
};

inline constexpr double kMinEmbedSeconds = 0.5;

/// Deterministic stand-in embedder: per-band means of log mel energies
/// (dim bands over 0-8 kHz, 25 ms / 10 ms frames), mean-removed, unit norm.
/// Throws TooShort below 0.5 s.
SpeakerEmbedding mock_embed(const AudioRecord& record, std::size_t dim = kDefaultDim);

/// Dot product of the unit vectors clamped to [-1, 1].
double cosine_similarity(const SpeakerEmbedding& a, const SpeakerEmbedding& b);

struct VerificationScore {
  double similarity = 0.0;
  bool accepted = false;
};

inline constexpr double kDefaultTau = 0.5;

VerificationScore verify(const SpeakerEmbedding& candidate, const SpeakerEmbedding& reference,
                         double tau = kDefaultTau);

struct EerResult {
  double threshold = 0.0;
  double eer = 0.0;
};

/// Threshold where false accepts (impostor >= t) equal false rejects
/// (genuine < t), interpolating linearly between adjacent operating points.
/// When the rates are equal over a whole interval of thresholds the midpoint
/// of that interval is returned. Throws EmptyScores.
EerResult calibrate_threshold_eer(std::span<const double> genuine,
                                  std::span<const double> impostor);

/// Normalized (1 - alpha) a + alpha b. Endpoints return the inputs exactly.
SpeakerEmbedding interpolate(const SpeakerEmbedding& a, const SpeakerEmbedding& b,
                             double alpha);

/// Binary sidecar: "SPKE", uint32 dim, dim float32, all little-endian.
void write_embedding(const std::filesystem::path& path, const SpeakerEmbedding& e);
SpeakerEmbedding read_embedding(const std::filesystem::path& path);

}  // namespace corpusforge::speaker

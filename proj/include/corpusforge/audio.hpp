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
#include <filesystem>
#include <span>
#include <vector>

#include "corpusforge/error.hpp"

namespace corpusforge {

/// Mono PCM audio with samples in [-1, 1].
struct AudioRecord {
  std::vector<float> samples;
  int sample_rate = 16000;

  double duration_s() const {
    return static_cast<double>(samples.size()) / static_cast<double>(sample_rate);
  }
  std::span<const float> view() const { return samples; }

  /// Samples [first, last) as a new record.
  AudioRecord slice(std::size_t first, std::size_t last) const;
};

/// Reads 16-bit PCM mono WAV. Throws IoError on anything else.
AudioRecord read_wav(const std::filesystem::path& path);

/// Writes 16-bit PCM mono WAV; samples are clipped to [-1, 1].
void write_wav(const std::filesystem::path& path, const AudioRecord& record);

}  // namespace corpusforge

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
#include <random>
#include <string>
#include <vector>

#include "corpusforge/alignment.hpp"
#include "corpusforge/audio.hpp"
#include "corpusforge/manifest.hpp"
#include "corpusforge/segmenter.hpp"
#include "corpusforge/speakerid.hpp"

namespace cftest {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& name) const { return path_ / name; }

 private:
  fs::path path_;
};

/// Gamma(shape)-distributed magnitudes with a random sign, unit scale.
std::vector<double> gamma_speech(std::size_t n, double shape, std::mt19937_64& rng);

/// Gamma "speech" plus white Gaussian noise at the given true SNR (power
/// ratio over the whole signal). The speech part has RMS `speech_rms`.
corpusforge::AudioRecord noisy_speech(double snr_db, double seconds, std::uint64_t seed,
                                      double speech_rms = 0.05, int sample_rate = 16000);

/// White Gaussian noise with the given RMS.
corpusforge::AudioRecord white_noise(double seconds, double rms, std::uint64_t seed,
                                     int sample_rate = 16000);

/// Recording with speech only between `speech_start` and `speech_end`
/// (gamma speech) and Gaussian noise everywhere at `snr_db` relative to the
/// speech part.
corpusforge::AudioRecord framed_speech(double seconds, double speech_start, double speech_end,
                                       double snr_db, std::uint64_t seed);

/// Evenly spaced words covering [start, end]; each word takes `fill` of its
/// slot. `confidence` applies to all.
corpusforge::WordList spread_words(const std::vector<std::string>& tokens, double start,
                                   double end, double fill = 0.8, double confidence = 0.99);

/// Writes <path> and its "<path>.words.json" alignment sidecar.
void write_fixture(const fs::path& wav, const corpusforge::AudioRecord& audio,
                   const corpusforge::WordList& words);

/// Rows of the multi-speaker statistics table (train and validation) with
/// durations spread over files in whole milliseconds and word counts spread
/// over transcripts. Each entry carries extra "split".
std::vector<corpusforge::pipeline::CorpusEntry> corpus_stats_manifest();

std::string read_file(const fs::path& path);
void write_file(const fs::path& path, const std::string& content);

/// Path of a file bundled under tests/fixtures.
fs::path fixture(const std::string& name);

// Oracles --------------------------------------------------------------------

/// Levenshtein distance over code points, full (|a|+1) x (|b|+1) table.
std::size_t levenshtein_table(const std::u32string& a, const std::u32string& b);

/// Random aligned words. With `grid` all times are multiples of 0.5 s so that
/// many cut sets tie exactly; a third of the words end a sentence.
corpusforge::WordList random_words(std::mt19937& rng, std::size_t n, bool grid);

/// Tries all 2^(n-1) cut subsets: highest objective, then fewer cuts, then
/// the lexicographically smaller cut list. Throws when nothing is feasible.
corpusforge::segment::Segmentation brute_force_cuts(
    const corpusforge::WordList& words, const std::vector<corpusforge::segment::PauseCut>& cuts,
    const corpusforge::segment::SegmentationOptions& opts);

/// Equal error rate by sweeping every observed score as a threshold (plus
/// one step past the largest) and counting accepts and rejects directly.
corpusforge::speaker::EerResult eer_sweep(const std::vector<double>& genuine,
                                          const std::vector<double>& impostor);

}  // namespace cftest

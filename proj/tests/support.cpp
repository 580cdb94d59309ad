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


#include "support.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <fstream>
#include <sstream>

#include "corpusforge/bridge.hpp"

namespace cftest {

using namespace corpusforge;

TempDir::TempDir() {
  std::string tmpl = (fs::temp_directory_path() / "cftest-XXXXXX").string();
  if (!::mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

std::vector<double> gamma_speech(std::size_t n, double shape, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(shape, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::vector<double> out(n);
  for (auto& v : out) v = sign(rng) ? gamma(rng) : -gamma(rng);
  return out;
}

namespace {

double rms(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace

AudioRecord noisy_speech(double snr_db, double seconds, std::uint64_t seed, double speech_rms,
                         int sample_rate) {
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate));
  auto speech = gamma_speech(n, 0.4, rng);
  const double scale = speech_rms / rms(speech);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise_rms = speech_rms / std::pow(10.0, snr_db / 20.0);
  AudioRecord out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.samples[i] = static_cast<float>(speech[i] * scale + noise_rms * normal(rng));
  return out;
}

AudioRecord white_noise(double seconds, double rms, std::uint64_t seed, int sample_rate) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, rms);
  AudioRecord out;
  out.sample_rate = sample_rate;
  out.samples.resize(static_cast<std::size_t>(std::llround(seconds * sample_rate)));
  for (auto& v : out.samples) v = static_cast<float>(normal(rng));
  return out;
}

AudioRecord framed_speech(double seconds, double speech_start, double speech_end, double snr_db,
                          std::uint64_t seed) {
  constexpr int sr = 16000;
  constexpr double speech_rms = 0.05;
  std::mt19937_64 rng(seed);
  const auto n = static_cast<std::size_t>(std::llround(seconds * sr));
  const auto a = static_cast<std::size_t>(std::llround(speech_start * sr));
  const auto b = static_cast<std::size_t>(std::llround(speech_end * sr));
  auto speech = gamma_speech(b - a, 0.4, rng);
  const double scale = speech_rms / rms(speech);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double noise_rms = speech_rms / std::pow(10.0, snr_db / 20.0);
  AudioRecord out;
  out.sample_rate = sr;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = noise_rms * normal(rng);
    if (i >= a && i < b) v += speech[i - a] * scale;
    out.samples[i] = static_cast<float>(v);
  }
  return out;
}

WordList spread_words(const std::vector<std::string>& tokens, double start, double end,
                      double fill, double confidence) {
  WordList words;
  const double slot = (end - start) / static_cast<double>(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    WordAlignment w;
    w.word = tokens[i];
    w.start_s = start + slot * static_cast<double>(i);
    w.end_s = i + 1 == tokens.size() ? end : w.start_s + slot * fill;
    w.confidence = confidence;
    words.push_back(w);
  }
  return words;
}

void write_fixture(const fs::path& wav, const AudioRecord& audio, const WordList& words) {
  write_wav(wav, audio);
  bridge::AsrResult asr;
  asr.words = words;
  for (const auto& w : words) {
    if (!asr.text.empty()) asr.text.push_back(' ');
    asr.text += w.word;
  }
  bridge::write_words_sidecar(wav, asr);
}

std::vector<pipeline::CorpusEntry> corpus_stats_manifest() {
  struct Row {
    const char* dataset;
    const char* split;
    double hours;
    std::size_t files;
    std::size_t words;
  };
  static const Row rows[] = {
      {"ASR-CV", "train", 21.6, 25180, 173944},
      {"ASR-VP", "train", 39.0, 13753, 299897},
      {"ASR-Speecon", "train", 92.9, 151531, 548968},
      {"ASR-SPT-MGW", "train", 145.2, 115121, 1039934},
      {"TTS-PRO", "train", 15.7, 12148, 119119},
      {"Radio", "train", 1353.9, 711897, 11025299},
      {"ASR-CV", "validation", 5.0, 5603, 39787},
      {"ASR-VP", "validation", 2.4, 863, 18504},
      {"ASR-Speecon", "validation", 1.9, 3131, 11070},
      {"ASR-SPT-MGW", "validation", 1.5, 1188, 10445},
      // 20 files of 2 s: 0.011 h, printed as 0.0.
      {"TTS-PRO", "validation", 40.0 / 3600.0, 20, 153},
      {"Radio", "validation", 1.2, 698, 10139},
  };
  std::vector<pipeline::CorpusEntry> out;
  out.reserve(1'041'200);
  std::vector<std::string> transcripts;  // cache by word count
  for (const auto& r : rows) {
    const auto total_ms = static_cast<long long>(std::llround(r.hours * 3.6e6));
    const long long base_ms = total_ms / static_cast<long long>(r.files);
    const long long extra_ms = total_ms % static_cast<long long>(r.files);
    const std::size_t base_words = r.words / r.files;
    const std::size_t extra_words = r.words % r.files;
    for (std::size_t i = 0; i < r.files; ++i) {
      const long long ms = base_ms + (static_cast<long long>(i) < extra_ms ? 1 : 0);
      const std::size_t nw = base_words + (i < extra_words ? 1 : 0);
      if (transcripts.size() <= nw) {
        for (std::size_t k = transcripts.size(); k <= nw; ++k) {
          std::string t;
          for (std::size_t j = 0; j < k; ++j) t += j ? " slovo" : "slovo";
          transcripts.push_back(std::move(t));
        }
      }
      pipeline::CorpusEntry e;
      e.id = std::string(r.dataset) + "/" + r.split + "/" + std::to_string(i);
      e.dataset = r.dataset;
      e.audio = e.id + ".wav";
      e.duration_s = static_cast<double>(ms) / 1000.0;
      e.transcript = transcripts[nw];
      e.extra["split"] = r.split;
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
}

fs::path fixture(const std::string& name) { return fs::path(CORPUSFORGE_FIXTURE_DIR) / name; }

std::size_t levenshtein_table(const std::u32string& a, const std::u32string& b) {
  std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1));
  for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = i;
  for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                          d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0u : 1u)});
    }
  }
  return d[a.size()][b.size()];
}

WordList random_words(std::mt19937& rng, std::size_t n, bool grid) {
  std::uniform_real_distribution<double> len(0.3, 4.0), gap(0.0, 3.0);
  std::uniform_int_distribution<int> half_steps(0, 6);
  std::bernoulli_distribution terminal(0.3);
  WordList words;
  double t = grid ? 0.5 * half_steps(rng) : gap(rng);
  for (std::size_t i = 0; i < n; ++i) {
    WordAlignment w;
    w.word = "w" + std::to_string(i);
    w.start_s = t;
    w.end_s = t + (grid ? 0.5 * (1 + half_steps(rng)) : len(rng));
    w.terminal_after = terminal(rng);
    if (w.terminal_after) w.word += ".";
    words.push_back(w);
    t = w.end_s + (grid ? 0.5 * half_steps(rng) : gap(rng) * (i % 3 == 0 ? 0.1 : 1.0));
  }
  return words;
}

segment::Segmentation brute_force_cuts(const WordList& words,
                                       const std::vector<segment::PauseCut>& cuts,
                                       const segment::SegmentationOptions& opts) {
  const std::size_t n = words.size();
  bool found = false;
  segment::Segmentation best;
  for (std::uint32_t mask = 0; mask < (1u << (n - 1)); ++mask) {
    std::vector<std::size_t> chosen;
    for (std::size_t b = 0; b + 1 < n; ++b)
      if (mask & (1u << b)) chosen.push_back(b);
    bool feasible = true;
    std::size_t first = 0;
    for (std::size_t k = 0; k <= chosen.size() && feasible; ++k) {
      const std::size_t last = k < chosen.size() ? chosen[k] : n - 1;
      feasible = words[last].end_s - words[first].start_s <= opts.max_len_s;
      first = last + 1;
    }
    if (!feasible) continue;
    double value = 0.0;
    for (std::size_t c : chosen) value += cuts[c].score - opts.cut_penalty;
    const bool better =
        !found || value > best.objective ||
        (value == best.objective &&
         (chosen.size() < best.cuts.size() ||
          (chosen.size() == best.cuts.size() && chosen < best.cuts)));
    if (better) {
      found = true;
      best = {chosen, value};
    }
  }
  if (!found) throw std::runtime_error("no feasible segmentation");
  return best;
}

speaker::EerResult eer_sweep(const std::vector<double>& genuine,
                             const std::vector<double>& impostor) {
  std::set<double> scores(genuine.begin(), genuine.end());
  scores.insert(impostor.begin(), impostor.end());
  std::vector<double> t(scores.begin(), scores.end());
  const double step = t.size() > 1 ? t.back() - t[t.size() - 2] : 1.0;
  t.push_back(t.back() + step);

  std::vector<double> far, frr;
  for (double th : t) {
    std::size_t fa = 0, fr = 0;
    for (double s : impostor) fa += s >= th ? 1 : 0;
    for (double s : genuine) fr += s < th ? 1 : 0;
    far.push_back(static_cast<double>(fa) / static_cast<double>(impostor.size()));
    frr.push_back(static_cast<double>(fr) / static_cast<double>(genuine.size()));
  }
  // FAR - FRR falls from 1 to -1. Either it is zero on a run of thresholds
  // (take the middle of the interval on which the rates hold) or it changes
  // sign between two neighbours (interpolate).
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double d = far[k] - frr[k];
    if (d == 0.0) {
      std::size_t end = k;
      while (end + 1 < t.size() && far[end + 1] - frr[end + 1] == 0.0) ++end;
      const double lo = k > 0 ? t[k - 1] : t[k];
      return {(lo + t[end]) / 2.0, far[k]};
    }
    if (d < 0.0) {
      const double d0 = far[k - 1] - frr[k - 1];
      const double alpha = d0 / (d0 - d);
      return {t[k - 1] + alpha * (t[k] - t[k - 1]), far[k - 1] + alpha * (far[k] - far[k - 1])};
    }
  }
  throw std::runtime_error("rates never cross");
}

}  // namespace cftest

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

#include "corpusforge/audioqc.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

namespace corpusforge::audioqc {
namespace {

// Pool-adjacent-violators fit to a non-decreasing sequence.
std::vector<double> isotonic_increasing(const std::vector<double>& y) {
  struct Block {
    double sum;
    std::size_t n;
  };
  std::vector<Block> blocks;
  for (double v : y) {
    blocks.push_back({v, 1});
    while (blocks.size() > 1) {
      const auto& b = blocks.back();
      const auto& a = blocks[blocks.size() - 2];
      if (a.sum / static_cast<double>(a.n) <= b.sum / static_cast<double>(b.n)) break;
      Block merged{a.sum + b.sum, a.n + b.n};
      blocks.pop_back();
      blocks.back() = merged;
    }
  }
  std::vector<double> out;
  out.reserve(y.size());
  for (const auto& b : blocks) {
    out.insert(out.end(), b.n, b.sum / static_cast<double>(b.n));
  }
  return out;
}

}  // namespace

SnrTable::SnrTable(std::vector<double> g_values) : g_(std::move(g_values)) {
  if (g_.size() != kPoints) {
    throw AudioError(AudioErrc::BadTable,
                     "expected " + std::to_string(kPoints) + " points, got " +
                         std::to_string(g_.size()));
  }
  for (std::size_t i = 1; i < g_.size(); ++i) {
    if (!(g_[i] > g_[i - 1])) {
      throw AudioError(AudioErrc::BadTable, "G values not strictly increasing at " +
                                                std::to_string(snr_at(i)) + " dB");
    }
  }
}

double SnrTable::snr_for(double g) const {
  if (!(g > g_.front())) return kMinSnrDb;
  if (g >= g_.back()) return kMaxSnrDb;
  const auto hi = static_cast<std::size_t>(
      std::upper_bound(g_.begin(), g_.end(), g) - g_.begin());
  const std::size_t lo = hi - 1;
  const double frac = (g - g_[lo]) / (g_[hi] - g_[lo]);
  return snr_at(lo) + frac;
}

void SnrTable::write(std::ostream& out) const {
  out << std::setprecision(17);
  for (std::size_t i = 0; i < g_.size(); ++i) {
    out << static_cast<int>(snr_at(i)) << ' ' << g_[i] << '\n';
  }
}

SnrTable SnrTable::read(std::istream& in) {
  std::vector<double> g;
  std::string line;
  int expected = kMinSnrDb;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double snr = 0, value = 0;
    if (!(ls >> snr >> value)) {
      throw AudioError(AudioErrc::BadTable, "bad table line '" + line + "'");
    }
    if (snr != expected) {
      throw AudioError(AudioErrc::BadTable, "unexpected grid point " + std::to_string(snr));
    }
    ++expected;
    g.push_back(value);
  }
  return SnrTable(std::move(g));
}

void SnrTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw IoError(IoErrc::OpenFailed, path.string());
  write(out);
}

SnrTable SnrTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoErrc::OpenFailed, path.string());
  return read(in);
}

double amplitude_statistic(std::span<const float> samples) {
  double sum_abs = 0.0, sum_log = 0.0;
  std::size_t n = 0;
  for (float s : samples) {
    const double a = std::fabs(static_cast<double>(s));
    if (a == 0.0) continue;
    sum_abs += a;
    sum_log += std::log(a);
    ++n;
  }
  if (n == 0) return std::numeric_limits<double>::quiet_NaN();
  const double dn = static_cast<double>(n);
  return std::log(sum_abs / dn) - sum_log / dn;
}

SnrTable build_snr_table(double shape, std::size_t samples_per_point, std::uint64_t seed) {
  if (samples_per_point < 1'000'000) {
    throw AudioError(AudioErrc::BadTable, "samples_per_point must be >= 1e6");
  }
  if (!(shape > 0.0)) throw AudioError(AudioErrc::BadTable, "shape must be positive");

  // Common random numbers across grid points: one speech draw, one noise draw.
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(shape, 1.0);
  std::bernoulli_distribution sign(0.5);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> speech(samples_per_point), noise(samples_per_point);
  double speech_power = 0.0, noise_power = 0.0;
  for (std::size_t i = 0; i < samples_per_point; ++i) {
    const double a = gamma(rng);
    speech[i] = sign(rng) ? a : -a;
    speech_power += speech[i] * speech[i];
  }
  for (std::size_t i = 0; i < samples_per_point; ++i) {
    noise[i] = normal(rng);
    noise_power += noise[i] * noise[i];
  }
  speech_power /= static_cast<double>(samples_per_point);
  noise_power /= static_cast<double>(samples_per_point);

  std::vector<double> g(SnrTable::kPoints);
  auto worker = [&](std::size_t begin, std::size_t end) {
    for (std::size_t p = begin; p < end; ++p) {
      const double snr_db = SnrTable::kMinSnrDb + static_cast<double>(p);
      const double scale = std::sqrt(speech_power / (noise_power * std::pow(10.0, snr_db / 10.0)));
      double sum_abs = 0.0, sum_log = 0.0;
      std::size_t n = 0;
      for (std::size_t i = 0; i < samples_per_point; ++i) {
        const double a = std::fabs(speech[i] + scale * noise[i]);
        if (a == 0.0) continue;
        sum_abs += a;
        sum_log += std::log(a);
        ++n;
      }
      const double dn = static_cast<double>(n);
      g[p] = std::log(sum_abs / dn) - sum_log / dn;
    }
  };
  const std::size_t threads =
      std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 8);
  const std::size_t per = (SnrTable::kPoints + threads - 1) / threads;
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      const std::size_t b = t * per, e = std::min(SnrTable::kPoints, b + per);
      if (b < e) pool.emplace_back(worker, b, e);
    }
  }

  g = isotonic_increasing(g);
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(g[i] > g[i - 1])) g[i] = std::nextafter(g[i - 1], std::numeric_limits<double>::infinity());
  }
  return SnrTable(std::move(g));
}

const SnrTable& default_snr_table() {
  static const SnrTable table = build_snr_table();
  return table;
}

double estimate_snr_wada(const AudioRecord& record, const SnrTable& table) {
  if (record.samples.size() < kMinSnrSamples) {
    throw AudioError(AudioErrc::TooShort, std::to_string(record.samples.size()) +
                                              " samples, need " +
                                              std::to_string(kMinSnrSamples));
  }
  const double g = amplitude_statistic(record.samples);
  if (std::isnan(g)) throw AudioError(AudioErrc::SilentSignal, "all samples are zero");
  return table.snr_for(g);
}

std::size_t sample_at(const AudioRecord& record, double t) {
  const long long pos = std::llround(t * record.sample_rate);
  if (pos <= 0) return 0;
  return std::min(static_cast<std::size_t>(pos), record.samples.size());
}

SampleSpan trim_span(const AudioRecord& record, const WordList& words, double max_pause_s) {
  if (words.empty()) throw AudioError(AudioErrc::EmptyAlignment, "no words");
  const double duration = record.duration_s();
  const double tol = 0.5 / record.sample_rate;
  double prev_start = -std::numeric_limits<double>::infinity();
  for (const auto& w : words) {
    if (!(w.start_s >= 0.0) || w.end_s < w.start_s || w.end_s > duration + tol ||
        w.start_s < prev_start) {
      std::ostringstream os;
      os << "word '" << w.word << "' [" << w.start_s << ", " << w.end_s
         << "] outside [0, " << duration << "] or out of order";
      throw AudioError(AudioErrc::OutOfRangeTimestamps, os.str());
    }
    prev_start = w.start_s;
  }
  const double t0 = std::max(0.0, words.front().start_s - max_pause_s);
  const double t1 = std::min(duration, words.back().end_s + max_pause_s);
  return {sample_at(record, t0), sample_at(record, t1)};
}

AudioRecord trim_to_alignment(const AudioRecord& record, const WordList& words,
                              double max_pause_s) {
  const auto span = trim_span(record, words, max_pause_s);
  return record.slice(span.first, span.last);
}

std::vector<double> frame_energies_db(const AudioRecord& record, const VadConfig& cfg) {
  const auto frame = static_cast<std::size_t>(std::lround(cfg.frame_ms * record.sample_rate / 1000.0));
  const auto hop = static_cast<std::size_t>(std::lround(cfg.hop_ms * record.sample_rate / 1000.0));
  if (frame == 0 || hop == 0) throw AudioError(AudioErrc::TooShort, "frame shorter than a sample");
  if (record.samples.size() < frame) {
    throw AudioError(AudioErrc::TooShort, "record shorter than one VAD frame");
  }
  const std::size_t n = 1 + (record.samples.size() - frame) / hop;
  std::vector<double> energies(n);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t i = k * hop; i < k * hop + frame; ++i) {
      acc += static_cast<double>(record.samples[i]) * record.samples[i];
    }
    energies[k] = 10.0 * std::log10(acc / static_cast<double>(frame) + 1e-12);
  }
  return energies;
}

std::vector<SpeechRegion> detect_speech_regions(const AudioRecord& record, const VadConfig& cfg) {
  const auto energies = frame_energies_db(record, cfg);
  const std::size_t n = energies.size();

  auto sorted = energies;
  std::sort(sorted.begin(), sorted.end());
  const auto rank = static_cast<std::size_t>(
      std::floor(cfg.floor_percentile / 100.0 * static_cast<double>(n - 1)));
  const double threshold = sorted[std::min(rank, n - 1)] + cfg.threshold_db;

  std::vector<bool> speech(n);
  for (std::size_t k = 0; k < n; ++k) speech[k] = energies[k] > threshold;

  // Hangover: hold the speech decision for a while after it drops.
  const auto hang = static_cast<std::size_t>(std::lround(cfg.hangover_ms / cfg.hop_ms));
  std::size_t hold = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (energies[k] > threshold) {
      hold = hang;
    } else if (hold > 0) {
      speech[k] = true;
      --hold;
    }
  }

  const double hop_s = cfg.hop_ms / 1000.0;
  const double offset_s = (cfg.frame_ms - cfg.hop_ms) / 2000.0;
  const double duration = record.duration_s();
  auto cell_start = [&](std::size_t k) {
    return k == 0 ? 0.0 : std::min(duration, offset_s + static_cast<double>(k) * hop_s);
  };
  auto cell_end = [&](std::size_t k) {
    return k + 1 == n ? duration
                      : std::min(duration, offset_s + static_cast<double>(k + 1) * hop_s);
  };

  std::vector<SpeechRegion> regions;
  for (std::size_t k = 0; k < n;) {
    if (!speech[k]) {
      ++k;
      continue;
    }
    std::size_t j = k;
    while (j + 1 < n && speech[j + 1]) ++j;
    regions.push_back({cell_start(k), cell_end(j)});
    k = j + 1;
  }

  std::vector<SpeechRegion> merged;
  for (const auto& r : regions) {
    if (!merged.empty() && r.start_s - merged.back().end_s < cfg.merge_gap_ms / 1000.0) {
      merged.back().end_s = r.end_s;
    } else {
      merged.push_back(r);
    }
  }
  std::erase_if(merged, [&](const SpeechRegion& r) {
    return r.end_s - r.start_s < cfg.min_region_ms / 1000.0;
  });
  return merged;
}

}  // namespace corpusforge::audioqc

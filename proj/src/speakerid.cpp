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

#include "corpusforge/speakerid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>

namespace corpusforge::speaker {
namespace {

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

// FFTW planning is not thread-safe; execution on plan-owned buffers is.
std::mutex& fftw_planner_mutex() {
  static std::mutex mu;
  return mu;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    std::lock_guard lock(fftw_planner_mutex());
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() { return in_; }

  // Power spectrum of the current input, n/2 + 1 bins.
  void power(std::vector<double>& out) {
    fftw_execute(plan_);
    out.resize(n_ / 2 + 1);
    for (std::size_t k = 0; k < out.size(); ++k) {
      out[k] = out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1];
    }
  }

 private:
  std::size_t n_;
  double* in_ = nullptr;
  fftw_complex* out_ = nullptr;
  fftw_plan plan_ = nullptr;
};

// Triangular mel filters; bands narrower than one FFT bin sample the
// linearly interpolated spectrum at their centre.
struct MelBank {
  struct Band {
    std::size_t first_bin = 0;
    std::vector<double> weights;
    double centre_bin = 0.0;
  };
  std::vector<Band> bands;

  MelBank(std::size_t dim, std::size_t n_fft, int sample_rate) {
    const double fmax = std::min(8000.0, sample_rate / 2.0);
    const double mel_max = hz_to_mel(fmax);
    const double bin_hz = static_cast<double>(sample_rate) / static_cast<double>(n_fft);
    const std::size_t n_bins = n_fft / 2 + 1;
    for (std::size_t b = 0; b < dim; ++b) {
      const double lo = mel_to_hz(mel_max * static_cast<double>(b) / static_cast<double>(dim + 1));
      const double mid = mel_to_hz(mel_max * static_cast<double>(b + 1) / static_cast<double>(dim + 1));
      const double hi = mel_to_hz(mel_max * static_cast<double>(b + 2) / static_cast<double>(dim + 1));
      Band band;
      band.centre_bin = mid / bin_hz;
      const auto k0 = static_cast<std::size_t>(std::ceil(lo / bin_hz));
      const auto k1 = std::min(n_bins - 1, static_cast<std::size_t>(std::floor(hi / bin_hz)));
      band.first_bin = k0;
      for (std::size_t k = k0; k <= k1 && k0 <= k1; ++k) {
        const double f = static_cast<double>(k) * bin_hz;
        const double w = f <= mid ? (f - lo) / (mid - lo) : (hi - f) / (hi - mid);
        band.weights.push_back(std::max(0.0, w));
      }
      double total = 0.0;
      for (double w : band.weights) total += w;
      if (total <= 0.0) band.weights.clear();
      bands.push_back(std::move(band));
    }
  }

  double energy(const Band& band, const std::vector<double>& power) const {
    if (band.weights.empty()) {
      const double pos = std::min(band.centre_bin, static_cast<double>(power.size() - 1));
      const auto k = static_cast<std::size_t>(std::floor(pos));
      const std::size_t k1 = std::min(k + 1, power.size() - 1);
      const double frac = pos - static_cast<double>(k);
      return power[k] * (1.0 - frac) + power[k1] * frac;
    }
    double e = 0.0;
    for (std::size_t i = 0; i < band.weights.size(); ++i) {
      e += band.weights[i] * power[band.first_bin + i];
    }
    return e;
  }
};

}  // namespace

SpeakerEmbedding::SpeakerEmbedding(std::vector<double> values, std::string model_id)
    : values_(std::move(values)), model_id_(std::move(model_id)) {
  double norm2 = 0.0;
  for (double v : values_) norm2 += v * v;
  const double norm = std::sqrt(norm2);
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw SpeakerError(SpeakerErrc::ZeroVector, "embedding cannot be normalized");
  }
  for (double& v : values_) v /= norm;
}

SpeakerEmbedding mock_embed(const AudioRecord& record, std::size_t dim) {
  if (record.duration_s() < kMinEmbedSeconds) {
    throw SpeakerError(SpeakerErrc::TooShort, "need at least 0.5 s of audio");
  }
  if (dim == 0) throw SpeakerError(SpeakerErrc::DimensionMismatch, "dimension must be positive");
  const auto win = static_cast<std::size_t>(std::lround(0.025 * record.sample_rate));
  const auto hop = static_cast<std::size_t>(std::lround(0.010 * record.sample_rate));
  std::size_t n_fft = 1;
  while (n_fft < win) n_fft <<= 1;

  std::vector<double> window(win);
  for (std::size_t i = 0; i < win; ++i) {
    window[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                     static_cast<double>(win - 1));
  }
  const MelBank bank(dim, n_fft, record.sample_rate);
  RealFft fft(n_fft);
  std::vector<double> power;
  std::vector<double> acc(dim, 0.0);
  std::size_t frames = 0;
  for (std::size_t start = 0; start + win <= record.samples.size(); start += hop) {
    double* in = fft.input();
    std::fill(in, in + n_fft, 0.0);
    for (std::size_t i = 0; i < win; ++i) in[i] = record.samples[start + i] * window[i];
    fft.power(power);
    for (std::size_t b = 0; b < dim; ++b) {
      acc[b] += std::log(bank.energy(bank.bands[b], power) + 1e-10);
    }
    ++frames;
  }
  double mean = 0.0;
  for (double& v : acc) {
    v /= static_cast<double>(frames);
    mean += v;
  }
  mean /= static_cast<double>(dim);
  for (double& v : acc) v -= mean;
  return SpeakerEmbedding(std::move(acc), "mock-logmel");
}

double cosine_similarity(const SpeakerEmbedding& a, const SpeakerEmbedding& b) {
  if (a.dim() != b.dim()) {
    throw SpeakerError(SpeakerErrc::DimensionMismatch,
                       std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values()[i] * b.values()[i];
  return std::clamp(dot, -1.0, 1.0);
}

VerificationScore verify(const SpeakerEmbedding& candidate, const SpeakerEmbedding& reference,
                         double tau) {
  const double s = cosine_similarity(candidate, reference);
  return {s, s >= tau};
}

EerResult calibrate_threshold_eer(std::span<const double> genuine,
                                  std::span<const double> impostor) {
  if (genuine.empty() || impostor.empty()) {
    throw SpeakerError(SpeakerErrc::EmptyScores, "need genuine and impostor scores");
  }
  std::vector<double> g(genuine.begin(), genuine.end());
  std::vector<double> im(impostor.begin(), impostor.end());
  std::sort(g.begin(), g.end());
  std::sort(im.begin(), im.end());
  std::vector<double> thresholds;
  thresholds.reserve(g.size() + im.size());
  std::merge(g.begin(), g.end(), im.begin(), im.end(), std::back_inserter(thresholds));
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

  const double ng = static_cast<double>(g.size());
  const double ni = static_cast<double>(im.size());
  struct Point {
    double t, far, frr;
  };
  std::vector<Point> pts;
  pts.reserve(thresholds.size() + 1);
  for (double t : thresholds) {
    const auto below_g = std::lower_bound(g.begin(), g.end(), t) - g.begin();
    const auto below_i = std::lower_bound(im.begin(), im.end(), t) - im.begin();
    pts.push_back({t, (ni - static_cast<double>(below_i)) / ni, static_cast<double>(below_g) / ng});
  }
  // Past the largest score everything is rejected.
  const double top = thresholds.back();
  const double step = thresholds.size() > 1 ? top - thresholds[thresholds.size() - 2] : 1.0;
  pts.push_back({top + step, 0.0, 1.0});

  auto diff = [](const Point& p) { return p.far - p.frr; };
  std::size_t a = pts.size();
  for (std::size_t k = 0; k < pts.size(); ++k) {
    if (diff(pts[k]) == 0.0) {
      a = k;
      break;
    }
    if (diff(pts[k]) < 0.0) break;
  }
  if (a < pts.size()) {
    std::size_t b = a;
    while (b + 1 < pts.size() && diff(pts[b + 1]) == 0.0) ++b;
    // Rates are constant on (t[a-1], t[b]]; take the midpoint.
    const double lo = a > 0 ? pts[a - 1].t : pts[a].t;
    return {(lo + pts[b].t) / 2.0, pts[a].far};
  }
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    const double d0 = diff(pts[k]), d1 = diff(pts[k + 1]);
    if (d0 > 0.0 && d1 < 0.0) {
      const double alpha = d0 / (d0 - d1);
      return {pts[k].t + alpha * (pts[k + 1].t - pts[k].t),
              pts[k].far + alpha * (pts[k + 1].far - pts[k].far)};
    }
  }
  // Unreachable: the first point has FAR 1, FRR 0 and the last FAR 0, FRR 1.
  return {pts.front().t, 0.5};
}

SpeakerEmbedding interpolate(const SpeakerEmbedding& a, const SpeakerEmbedding& b,
                             double alpha) {
  if (a.dim() != b.dim()) {
    throw SpeakerError(SpeakerErrc::DimensionMismatch,
                       std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
  }
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw SpeakerError(SpeakerErrc::DegenerateInterpolation, "alpha outside [0, 1]");
  }
  if (alpha == 0.0) return a;
  if (alpha == 1.0) return b;
  std::vector<double> mix(a.dim());
  double norm2 = 0.0;
  for (std::size_t i = 0; i < mix.size(); ++i) {
    mix[i] = (1.0 - alpha) * a.values()[i] + alpha * b.values()[i];
    norm2 += mix[i] * mix[i];
  }
  if (norm2 < 1e-24) {
    throw SpeakerError(SpeakerErrc::DegenerateInterpolation, "combination is the zero vector");
  }
  return SpeakerEmbedding(std::move(mix), a.model_id());
}

void write_embedding(const std::filesystem::path& path, const SpeakerEmbedding& e) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrc::OpenFailed, path.string());
  auto put32 = [&](std::uint32_t v) {
    const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                       static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
    out.write(b, 4);
  };
  out.write("SPKE", 4);
  put32(static_cast<std::uint32_t>(e.dim()));
  for (double v : e.values()) {
    const auto f = static_cast<float>(v);
    std::uint32_t bits;
    std::memcpy(&bits, &f, 4);
    put32(bits);
  }
  if (!out) throw IoError(IoErrc::WriteFailed, path.string());
}

SpeakerEmbedding read_embedding(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrc::OpenFailed, path.string());
  auto get32 = [&]() {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
      throw SpeakerError(SpeakerErrc::BadFile, path.string() + ": truncated");
    }
    return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
           static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
  };
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "SPKE", 4) != 0) {
    throw SpeakerError(SpeakerErrc::BadFile, path.string() + ": bad magic");
  }
  const std::uint32_t dim = get32();
  std::vector<double> values(dim);
  for (auto& v : values) {
    const std::uint32_t bits = get32();
    float f;
    std::memcpy(&f, &bits, 4);
    v = f;
  }
  return SpeakerEmbedding(std::move(values));
}

}  // namespace corpusforge::speaker

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


#include "corpusforge/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace corpusforge::pipeline {

namespace {

struct Key {
  std::string name;
  std::function<double&(PipelineConfig&)> real;  // null for integer keys
  std::function<int&(PipelineConfig&)> integer;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> k;
    auto real = [&k](std::string name, double PipelineConfig::*m) {
      k.push_back({std::move(name), [m](PipelineConfig& c) -> double& { return c.*m; }, {}});
    };
    auto vad = [&k](std::string name, double audioqc::VadConfig::*m) {
      k.push_back({std::move(name), [m](PipelineConfig& c) -> double& { return c.vad.*m; }, {}});
    };
    real("snr_min_db", &PipelineConfig::snr_min_db);
    real("cer_max", &PipelineConfig::cer_max);
    real("trim_max_pause_s", &PipelineConfig::trim_max_pause_s);
    real("dur_min_s", &PipelineConfig::dur_min_s);
    real("dur_max_s", &PipelineConfig::dur_max_s);
    real("lang_prob_min", &PipelineConfig::lang_prob_min);
    real("word_conf_min", &PipelineConfig::word_conf_min);
    real("cut_bonus_s", &PipelineConfig::cut_bonus_s);
    real("cut_penalty_s", &PipelineConfig::cut_penalty_s);
    real("verify_tau", &PipelineConfig::verify_tau);
    k.push_back({"embed_dim", {}, [](PipelineConfig& c) -> int& { return c.embed_dim; }});
    vad("vad_frame_ms", &audioqc::VadConfig::frame_ms);
    vad("vad_hop_ms", &audioqc::VadConfig::hop_ms);
    vad("vad_threshold_db", &audioqc::VadConfig::threshold_db);
    vad("vad_floor_percentile", &audioqc::VadConfig::floor_percentile);
    vad("vad_hangover_ms", &audioqc::VadConfig::hangover_ms);
    vad("vad_merge_gap_ms", &audioqc::VadConfig::merge_gap_ms);
    vad("vad_min_region_ms", &audioqc::VadConfig::min_region_ms);
    return k;
  }();
  return table;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(ConfigErrc::OutOfRange, what);
}

}  // namespace

void PipelineConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(snr_min_db) && snr_min_db >= -20.0 && snr_min_db <= 100.0,
          "snr_min_db must lie in [-20, 100]");
  require(finite(cer_max) && cer_max >= 0.0, "cer_max must be >= 0");
  require(finite(trim_max_pause_s) && trim_max_pause_s >= 0.0, "trim_max_pause_s must be >= 0");
  require(finite(dur_min_s) && dur_min_s >= 0.0, "dur_min_s must be >= 0");
  require(finite(dur_max_s) && dur_max_s > dur_min_s, "dur_max_s must exceed dur_min_s");
  require(lang_prob_min >= 0.0 && lang_prob_min <= 1.0, "lang_prob_min must lie in [0, 1]");
  require(word_conf_min >= 0.0 && word_conf_min <= 1.0, "word_conf_min must lie in [0, 1]");
  require(finite(cut_bonus_s) && cut_bonus_s >= 0.0, "cut_bonus_s must be >= 0");
  require(finite(cut_penalty_s) && cut_penalty_s >= 0.0, "cut_penalty_s must be >= 0");
  require(verify_tau >= -1.0 && verify_tau <= 1.0, "verify_tau must lie in [-1, 1]");
  require(embed_dim > 0, "embed_dim must be positive");
  require(vad.frame_ms > 0.0 && vad.hop_ms > 0.0, "vad frame and hop must be positive");
  require(vad.floor_percentile >= 0.0 && vad.floor_percentile <= 100.0,
          "vad_floor_percentile must lie in [0, 100]");
  require(vad.hangover_ms >= 0.0 && vad.merge_gap_ms >= 0.0 && vad.min_region_ms >= 0.0,
          "vad durations must be >= 0");
}

PipelineConfig parse_config(std::istream& in) {
  PipelineConfig cfg;
  std::set<std::string> seen;
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(std::string_view(raw).substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(ConfigErrc::Syntax, where + "expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const Key* match = nullptr;
    for (const auto& k : keys())
      if (k.name == key) match = &k;
    if (!match) throw ConfigError(ConfigErrc::UnknownKey, where + "unknown key '" + key + "'");
    if (!seen.insert(key).second)
      throw ConfigError(ConfigErrc::Syntax, where + "duplicate key '" + key + "'");

    const char* first = value.data();
    const char* last = value.data() + value.size();
    if (match->real) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || value.empty() || !std::isfinite(v))
        throw ConfigError(ConfigErrc::BadValue, where + key + ": not a number: '" + value + "'");
      match->real(cfg) = v;
    } else {
      int v = 0;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (ec != std::errc() || ptr != last || value.empty())
        throw ConfigError(ConfigErrc::BadValue, where + key + ": not an integer: '" + value + "'");
      match->integer(cfg) = v;
    }
  }
  cfg.validate();
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(IoErrc::OpenFailed, "cannot open config " + path.string());
  return parse_config(in);
}

std::string to_text(const PipelineConfig& cfg) {
  PipelineConfig copy = cfg;
  std::ostringstream out;
  for (const auto& k : keys()) {
    out << k.name << " = ";
    if (k.real)
      out << nlohmann::json(k.real(copy)).dump();
    else
      out << k.integer(copy);
    out << '\n';
  }
  return out.str();
}

}  // namespace corpusforge::pipeline

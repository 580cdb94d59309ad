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
#include <iosfwd>
#include <string>
#include <string_view>

#include "corpusforge/audioqc.hpp"
#include "corpusforge/error.hpp"

namespace corpusforge::pipeline {

enum class ConfigErrc { UnknownKey, BadValue, OutOfRange, Syntax };

constexpr std::string_view to_string(ConfigErrc kind) {
  switch (kind) {
    case ConfigErrc::UnknownKey: return "UnknownKey";
    case ConfigErrc::BadValue: return "BadValue";
    case ConfigErrc::OutOfRange: return "OutOfRange";
    case ConfigErrc::Syntax: return "Syntax";
  }
  return "ConfigError";
}

using ConfigError = KindedError<ConfigErrc>;

struct PipelineConfig {
  double snr_min_db = 20.0;
  double cer_max = 0.1;
  double trim_max_pause_s = 0.25;
  double dur_min_s = 1.0;
  double dur_max_s = 30.0;
  double lang_prob_min = 0.99;
  double word_conf_min = 0.95;
  double cut_bonus_s = 2.0;
  double cut_penalty_s = 1.0;
  double verify_tau = 0.5;
  int embed_dim = 512;
  audioqc::VadConfig vad;

  /// Throws ConfigError(OutOfRange).
  void validate() const;
};

/// "key = value" lines, '#' starts a comment. Keys not set keep their
/// defaults; unknown keys and malformed values throw.
PipelineConfig parse_config(std::istream& in);
PipelineConfig load_config(const std::filesystem::path& path);

/// Every key, one per line, in declaration order.
std::string to_text(const PipelineConfig& cfg);

}  // namespace corpusforge::pipeline

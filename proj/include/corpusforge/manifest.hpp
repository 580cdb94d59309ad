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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "corpusforge/error.hpp"
#include "json.hpp"

namespace corpusforge::pipeline {

enum class ManifestErrc { BadRow, DuplicateId };

constexpr std::string_view to_string(ManifestErrc kind) {
  switch (kind) {
    case ManifestErrc::BadRow: return "BadRow";
    case ManifestErrc::DuplicateId: return "DuplicateId";
  }
  return "ManifestError";
}

using ManifestError = KindedError<ManifestErrc>;

enum class Source { Annotated, RadioAsr, FewshotOration, FewshotInterview, FewshotRead };

std::string_view to_string(Source source);
Source parse_source(std::string_view text);

/// An embedding is stored inline (JSON array) or as a path to an SPKE file.
using EmbeddingRef = std::variant<std::string, std::vector<double>>;

struct CorpusEntry {
  std::string id;
  std::string dataset;
  std::string audio;
  int sample_rate = 16000;
  double duration_s = 0.0;
  std::string transcript;
  std::string speaker;
  std::optional<double> snr_db;
  std::optional<double> cer;
  std::optional<double> min_word_conf;
  std::optional<EmbeddingRef> embedding;
  Source source = Source::Annotated;
  /// Columns not listed above (for example a "split" key), kept verbatim.
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();

  bool operator==(const CorpusEntry&) const = default;
};

/// Parses one JSONL row. Throws ManifestError(BadRow).
CorpusEntry parse_entry(std::string_view line);

/// One JSONL row, fixed field order, null for absent optionals, cer with
/// four fractional digits.
std::string format_entry(const CorpusEntry& entry);

struct BadRow {
  std::size_t line = 0;  // 1-based
  std::string message;
};

struct ManifestRead {
  std::vector<CorpusEntry> entries;
  std::vector<BadRow> bad_rows;
};

/// Reads every row, collecting unparsable ones instead of throwing. Blank
/// lines are skipped.
ManifestRead read_manifest(std::istream& in);
ManifestRead read_manifest(const std::filesystem::path& path);

/// Strict variant: any bad row or duplicate id throws.
std::vector<CorpusEntry> load_manifest(const std::filesystem::path& path);

void write_manifest(std::ostream& out, const std::vector<CorpusEntry>& entries);
void save_manifest(const std::filesystem::path& path, const std::vector<CorpusEntry>& entries);

/// Resolves a relative audio path against the manifest's directory.
std::filesystem::path resolve_audio(const CorpusEntry& entry,
                                    const std::filesystem::path& manifest_dir);

/// Value of a column for grouping: dataset, speaker, source or an extra
/// field. Missing columns give "".
std::string column_value(const CorpusEntry& entry, std::string_view key);

}  // namespace corpusforge::pipeline

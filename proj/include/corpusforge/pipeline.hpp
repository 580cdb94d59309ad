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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "corpusforge/audioqc.hpp"
#include "corpusforge/bridge.hpp"
#include "corpusforge/config.hpp"
#include "corpusforge/langid.hpp"
#include "corpusforge/manifest.hpp"
#include "corpusforge/textclean.hpp"
#include "corpusforge/wetparse.hpp"

namespace corpusforge::pipeline {

enum class PipelineErrc { MissingReference, MissingService };

constexpr std::string_view to_string(PipelineErrc kind) {
  switch (kind) {
    case PipelineErrc::MissingReference: return "MissingReference";
    case PipelineErrc::MissingService: return "MissingService";
  }
  return "PipelineError";
}

using PipelineError = KindedError<PipelineErrc>;

struct Services {
  std::shared_ptr<bridge::ServiceClient> asr;
  std::shared_ptr<bridge::ServiceClient> punct;
  std::shared_ptr<bridge::ServiceClient> embed;

  /// All three backed by the in-process mocks.
  static Services mocks(std::size_t embed_dim = speaker::kDefaultDim);
};

/// An entry dropped by a gate.
struct Removal {
  std::string id;
  std::string step;
  std::string reason;
};

/// An entry that raised an error while being processed.
struct Quarantined {
  std::string id;
  std::string reason;
};

struct RunReport {
  std::size_t input = 0;
  std::size_t output = 0;
  std::size_t quarantined = 0;
  std::map<std::string, std::size_t> removed;  // step -> count

  std::size_t total_removed() const;
  /// input == output + quarantined + total_removed()
  bool conserved() const;
  std::string to_text() const;
};

struct RunResult {
  std::vector<CorpusEntry> accepted;  // sorted by id
  std::vector<Removal> removals;      // sorted by id
  std::vector<Quarantined> quarantine;
  RunReport report;
};

struct RunOptions {
  std::filesystem::path audio_out;     // trimmed audio is written here
  std::filesystem::path manifest_dir;  // base for relative audio paths
  /// When set, embeddings go to <embed_dir>/<id>.spke and the manifest
  /// holds the path; otherwise they are stored inline.
  std::optional<std::filesystem::path> embed_dir;
  int jobs = 1;
  const audioqc::SnrTable* snr_table = nullptr;  // default table when null
};

/// Fine-tuning QC: trim, SNR gate, CER gate, punctuation, normalization,
/// duration and empty-transcript gates, embedding. Per-entry errors
/// quarantine the entry and the run continues.
RunResult run_finetune_qc(const std::vector<CorpusEntry>& entries, const PipelineConfig& cfg,
                          const Services& services, const RunOptions& opts);

/// Same, over a manifest read leniently: unparsable rows are quarantined
/// under the id "line:<n>".
RunResult run_finetune_qc(const ManifestRead& manifest, const PipelineConfig& cfg,
                          const Services& services, const RunOptions& opts);

enum class VoiceType { Oration, Interview, Read };

VoiceType parse_voice_type(std::string_view text);
std::string_view to_string(VoiceType type);

struct FewshotRequest {
  std::vector<std::filesystem::path> audio;
  VoiceType type = VoiceType::Oration;
  std::optional<std::filesystem::path> reference;  // required for interviews
  std::string speaker;
  std::string dataset = "fewshot";
};

/// Transcribe, punctuate, segment, slice and QC long recordings of one
/// speaker. Read-type inputs are already cut and go straight to QC, with
/// the transcript taken from "<stem>.txt" next to the audio when present.
/// Interview segments whose embedding scores below verify_tau against the
/// reference are removed at step "speaker".
RunResult run_fewshot_collect(const FewshotRequest& request, const PipelineConfig& cfg,
                              const Services& services, const RunOptions& opts);

// ---------------------------------------------------------------------------
// Statistics

struct StatsRow {
  std::string dataset;
  double seconds = 0.0;
  std::size_t files = 0;
  std::size_t words = 0;

  double hours() const { return seconds / 3600.0; }
};

struct StatsTable {
  std::string split;
  std::vector<StatsRow> rows;  // first-appearance order
  StatsRow total;              // unrounded sums; dataset "TOTAL"
};

/// One table per value of `split_key` (in first-appearance order); a single
/// table with split "" when the key is empty.
std::vector<StatsTable> compute_stats(const std::vector<CorpusEntry>& entries,
                                      std::string_view split_key = "");

/// Hours rounded to one decimal.
double round_hours(double hours);

/// Tab-separated: dataset, hours (one decimal), files, words; TOTAL last.
std::string format_stats(const StatsTable& table);

// ---------------------------------------------------------------------------
// Web text

struct TextRunResult {
  std::vector<wet::WebPage> pages;
  text::CleanReport report;
  std::vector<wet::ParseIssue> issues;
};

/// Reads WET archives (plain or gzipped) or previously cleaned text and
/// cleans every page in input order.
TextRunResult run_clean_text(const std::vector<std::filesystem::path>& inputs,
                             const text::CleanConfig& cfg,
                             const text::LanguageClassifier& classifier, text::DedupStore& store);

/// Pages from one input file, detecting the format.
std::vector<wet::WebPage> read_pages(const std::filesystem::path& path,
                                     std::vector<wet::ParseIssue>* issues = nullptr);

/// Expands shell-style wildcards in the final path component.
std::vector<std::filesystem::path> expand_glob(const std::string& pattern);

}  // namespace corpusforge::pipeline

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

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpusforge/error.hpp"
#include "corpusforge/langid.hpp"
#include "corpusforge/wetparse.hpp"

namespace corpusforge::text {

using wet::WebPage;

enum class TextErrc { ClassifierFailure, StoreUnavailable, InvalidConfig };

constexpr std::string_view to_string(TextErrc kind) {
  switch (kind) {
    case TextErrc::ClassifierFailure: return "ClassifierFailure";
    case TextErrc::StoreUnavailable: return "StoreUnavailable";
    case TextErrc::InvalidConfig: return "InvalidConfig";
  }
  return "TextError";
}

using TextError = KindedError<TextErrc>;

struct CleanConfig {
  std::u32string terminal_marks = U".?!";
  std::vector<std::string> forbidden_substrings = {"javascript", "cookies"};
  std::vector<std::string> placeholder_substrings = {"lorem ipsum", "{"};
  /// Lowercased entries; multi-word entries match as consecutive words.
  std::set<std::string> blacklist;
  std::string lang = "cs";
  double lang_prob_min = 0.99;
  int min_words_per_line = 3;
  int min_sentences_per_page = 5;

  void validate() const;
};

/// Reads one blacklist entry per line; blank lines and surrounding spaces are
/// ignored, entries are lowercased.
std::set<std::string> load_blacklist(std::istream& in);

/// 128-bit BLAKE2b digest of a whitespace-normalized line. For n distinct
/// lines the collision probability is about n^2 / 2^129.
struct Fingerprint {
  std::array<std::uint8_t, 16> bytes{};
  bool operator==(const Fingerprint&) const = default;
};

/// BLAKE2b-128 of the line after lowercasing and whitespace collapsing.
/// Lines that differ only in case share a fingerprint, so lowercased output
/// cannot contain duplicates.
Fingerprint fingerprint_line(std::string_view line);

/// Set of line fingerprints with atomic insert-if-absent.
class DedupStore {
 public:
  virtual ~DedupStore() = default;
  /// True exactly once per distinct fingerprint.
  virtual bool insert_if_absent(const Fingerprint& fp) = 0;
};

/// Sharded in-memory store; optionally persisted to a flat binary file so a
/// job can span several runs.
class MemoryDedupStore final : public DedupStore {
 public:
  MemoryDedupStore() = default;

  bool insert_if_absent(const Fingerprint& fp) override;
  std::size_t size() const;

  /// Throws TextError(StoreUnavailable) on I/O failure.
  void load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  struct Hash {
    std::size_t operator()(const Fingerprint& fp) const noexcept;
  };
  static constexpr std::size_t kShards = 64;
  struct Shard {
    mutable std::mutex mu;
    std::unordered_set<Fingerprint, Hash> set;
  };
  std::array<Shard, kShards> shards_;
};

/// Rule numbers follow the cleaning order: 1 terminal mark, 2 forbidden
/// substring, 3 blacklist, 4 placeholder, 5 language, 6 duplicate line,
/// 7 short line / too few sentences.
inline constexpr int kRuleCount = 7;

struct CleanReport {
  std::uint64_t pages_examined = 0;
  std::uint64_t pages_retained = 0;
  std::uint64_t lines_examined = 0;
  std::uint64_t lines_retained = 0;
  /// Index r-1 holds removals attributed to rule r. Lines of a dropped page
  /// count against the rule that dropped the page.
  std::array<std::uint64_t, kRuleCount> lines_removed{};
  std::array<std::uint64_t, kRuleCount> pages_removed{};

  void merge(const CleanReport& other);
  std::uint64_t total_lines_removed() const;
  std::uint64_t total_pages_removed() const;

  /// key = value summary.
  std::string to_text() const;
  /// JSON lines {"rule","scope","removed_count"}.
  std::string to_rows() const;

  bool operator==(const CleanReport&) const = default;
};

/// Rules 1-2: keep lines ending in a terminal mark without forbidden
/// substrings. Removed-line counts go to `report` when given.
WebPage apply_line_rules(const WebPage& page, const CleanConfig& cfg,
                         CleanReport* report = nullptr);

/// Rules 3-5 as a verdict: 0 when the page passes, else the rule number.
int page_rule_verdict(const WebPage& page, const CleanConfig& cfg,
                      const LanguageClassifier& classifier);

/// Rules 3-5: the page unchanged, or nullopt when any rule rejects it.
std::optional<WebPage> apply_page_rules(const WebPage& page, const CleanConfig& cfg,
                                        const LanguageClassifier& classifier);

/// Rule 6: true for the first occurrence of the normalized line.
bool dedup_line(std::string_view line, DedupStore& store);

/// Rules 1-7 then lowercasing. Updates `delta` exactly once per removal.
std::optional<WebPage> clean_page(const WebPage& page, const CleanConfig& cfg,
                                  const LanguageClassifier& classifier,
                                  DedupStore& store, CleanReport& delta);

/// Number of terminal marks across the lines.
std::size_t count_sentences(const std::vector<std::string>& lines, const CleanConfig& cfg);

/// Cleaned-text format: one line per line, each page followed by a blank line.
void write_clean_pages(std::ostream& out, const std::vector<WebPage>& pages);
std::vector<WebPage> read_clean_pages(std::istream& in);

}  // namespace corpusforge::text

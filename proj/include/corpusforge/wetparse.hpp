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
#include <istream>
#include <memory>
#include <optional>
#include <streambuf>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "corpusforge/error.hpp"

namespace corpusforge::wet {

enum class WetErrc { TruncatedRecord, MissingContentLength, BadContentLength, GzipError };

constexpr std::string_view to_string(WetErrc kind) {
  switch (kind) {
    case WetErrc::TruncatedRecord: return "TruncatedRecord";
    case WetErrc::MissingContentLength: return "MissingContentLength";
    case WetErrc::BadContentLength: return "BadContentLength";
    case WetErrc::GzipError: return "GzipError";
  }
  return "WetError";
}

using WetError = KindedError<WetErrc>;

/// One WARC record from a WET archive. Headers keep file order and exact
/// spelling so that serialize() reproduces the input.
struct WetRecord {
  std::string version = "WARC/1.0";
  std::vector<std::pair<std::string, std::string>> headers;
  std::string payload;
  std::string target_uri;
  std::string warc_type;

  /// First header with this name (case-insensitive), if any.
  std::optional<std::string> header(std::string_view name) const;

  bool operator==(const WetRecord&) const = default;
};

struct WebPage {
  std::string url;
  std::vector<std::string> lines;

  bool operator==(const WebPage&) const = default;
};

/// A malformed record that was skipped.
struct ParseIssue {
  WetErrc kind;
  std::uint64_t record_ordinal;  // 0-based count of version lines seen
  std::string detail;
};

/// Streams records out of a WARC/1.0 byte stream. Memory use is bounded by
/// the largest single record. Malformed records are recorded in issues()
/// and skipped; parsing resumes at the next version line.
class WetReader {
 public:
  /// `gzipped` wraps the input in a multi-member gzip decoder.
  WetReader(std::istream& input, bool gzipped);
  ~WetReader();
  WetReader(const WetReader&) = delete;
  WetReader& operator=(const WetReader&) = delete;

  /// Next well-formed record, or nullopt at end of stream.
  std::optional<WetRecord> next();

  const std::vector<ParseIssue>& issues() const { return issues_; }

 private:
  bool read_line(std::string& line);
  bool seek_version_line(std::string& line);

  std::unique_ptr<std::streambuf> gzip_buf_;
  std::unique_ptr<std::istream> gzip_stream_;
  std::istream* in_;
  std::optional<std::string> pending_line_;
  std::uint64_t ordinal_ = 0;
  std::vector<ParseIssue> issues_;
};

/// Reads an entire stream. Convenience over WetReader for small inputs.
std::vector<WetRecord> read_wet_stream(std::istream& input, bool gzipped,
                                       std::vector<ParseIssue>* issues = nullptr);

/// True when the first two bytes are the gzip magic; does not consume input.
bool looks_gzipped(std::istream& input);

/// Writes the record back in the record grammar (CRLF line endings).
std::string serialize(const WetRecord& record);

/// Converts a conversion record into a page; other record types yield nullopt.
std::optional<WebPage> to_page(const WetRecord& record);
std::vector<WebPage> to_pages(const std::vector<WetRecord>& records);

/// Splits decoded text into lines, stripping CR and dropping trailing empties.
std::vector<std::string> split_lines(std::string_view text);

}  // namespace corpusforge::wet

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

#include "corpusforge/wetparse.hpp"

#include <zlib.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cstring>

#include "corpusforge/utf8.hpp"

namespace corpusforge::wet {
namespace {

constexpr std::size_t kChunk = 1 << 16;

// Inflates a concatenation of gzip members. Member boundaries are
// independent of record boundaries.
class GzipInBuf : public std::streambuf {
 public:
  explicit GzipInBuf(std::istream& src) : src_(src) {
    std::memset(&zs_, 0, sizeof(zs_));
    if (inflateInit2(&zs_, 16 + MAX_WBITS) != Z_OK) {
      throw WetError(WetErrc::GzipError, "inflateInit2 failed");
    }
  }
  ~GzipInBuf() override { inflateEnd(&zs_); }

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    while (true) {
      if (zs_.avail_in == 0 && !finished_input_) {
        src_.read(in_.data(), static_cast<std::streamsize>(in_.size()));
        zs_.next_in = reinterpret_cast<Bytef*>(in_.data());
        zs_.avail_in = static_cast<uInt>(src_.gcount());
        if (zs_.avail_in == 0) finished_input_ = true;
      }
      if (zs_.avail_in == 0 && finished_input_) return traits_type::eof();
      if (member_done_) {
        // Skip zero padding some writers append between members.
        while (zs_.avail_in > 0 && *zs_.next_in == 0) ++zs_.next_in, --zs_.avail_in;
        if (zs_.avail_in == 0) continue;
        inflateReset(&zs_);
        member_done_ = false;
      }
      zs_.next_out = reinterpret_cast<Bytef*>(out_.data());
      zs_.avail_out = static_cast<uInt>(out_.size());
      const int rc = inflate(&zs_, Z_NO_FLUSH);
      if (rc == Z_STREAM_END) {
        member_done_ = true;
      } else if (rc != Z_OK && rc != Z_BUF_ERROR) {
        throw WetError(WetErrc::GzipError, zs_.msg ? zs_.msg : "inflate failed");
      }
      const std::size_t produced = out_.size() - zs_.avail_out;
      if (produced > 0) {
        setg(out_.data(), out_.data(), out_.data() + produced);
        return traits_type::to_int_type(*gptr());
      }
      if (rc == Z_BUF_ERROR && finished_input_) {
        throw WetError(WetErrc::GzipError, "truncated gzip stream");
      }
    }
  }

 private:
  std::istream& src_;
  z_stream zs_;
  std::array<char, kChunk> in_{};
  std::array<char, kChunk> out_{};
  bool finished_input_ = false;
  bool member_done_ = false;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_version_line(std::string_view line) { return line.starts_with("WARC/"); }

}  // namespace

std::optional<std::string> WetRecord::header(std::string_view name) const {
  for (const auto& [k, v] : headers) {
    if (iequals(k, name)) return v;
  }
  return std::nullopt;
}

WetReader::WetReader(std::istream& input, bool gzipped) : in_(&input) {
  if (gzipped) {
    gzip_buf_ = std::make_unique<GzipInBuf>(input);
    gzip_stream_ = std::make_unique<std::istream>(gzip_buf_.get());
    in_ = gzip_stream_.get();
  }
}

WetReader::~WetReader() = default;

bool WetReader::read_line(std::string& line) {
  if (pending_line_) {
    line = std::move(*pending_line_);
    pending_line_.reset();
    return true;
  }
  if (!std::getline(*in_, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

bool WetReader::seek_version_line(std::string& line) {
  while (read_line(line)) {
    if (is_version_line(line)) return true;
  }
  return false;
}

std::optional<WetRecord> WetReader::next() {
  std::string line;
  while (seek_version_line(line)) {
    const std::uint64_t ordinal = ordinal_++;
    WetRecord rec;
    rec.version = line;

    bool interrupted = false;
    while (read_line(line)) {
      if (line.empty()) break;
      if (is_version_line(line)) {
        pending_line_ = std::move(line);
        interrupted = true;
        break;
      }
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string value = line.substr(colon + 1);
      const auto first = value.find_first_not_of(" \t");
      value.erase(0, first == std::string::npos ? value.size() : first);
      rec.headers.emplace_back(line.substr(0, colon), std::move(value));
    }

    const auto length_text = rec.header("Content-Length");
    if (!length_text) {
      issues_.push_back({WetErrc::MissingContentLength, ordinal,
                         "record without Content-Length header"});
      continue;
    }
    std::uint64_t length = 0;
    const auto* b = length_text->data();
    const auto* e = b + length_text->size();
    const auto [ptr, ec] = std::from_chars(b, e, length);
    if (ec != std::errc() || ptr != e) {
      issues_.push_back({WetErrc::BadContentLength, ordinal,
                         "unparsable Content-Length '" + *length_text + "'"});
      continue;
    }
    if (interrupted) {
      issues_.push_back({WetErrc::TruncatedRecord, ordinal,
                         "header block interrupted by a version line"});
      continue;
    }

    rec.payload.resize(length);
    in_->read(rec.payload.data(), static_cast<std::streamsize>(length));
    const auto got = static_cast<std::uint64_t>(in_->gcount());
    if (got < length) {
      issues_.push_back({WetErrc::TruncatedRecord, ordinal,
                         "payload has " + std::to_string(got) + " of " +
                             std::to_string(length) + " bytes"});
      return std::nullopt;
    }

    // Separators: consume blank lines, stash whatever follows.
    while (read_line(line)) {
      if (!line.empty()) {
        pending_line_ = std::move(line);
        break;
      }
    }

    rec.target_uri = rec.header("WARC-Target-URI").value_or("");
    rec.warc_type = rec.header("WARC-Type").value_or("");
    return rec;
  }
  return std::nullopt;
}

std::vector<WetRecord> read_wet_stream(std::istream& input, bool gzipped,
                                       std::vector<ParseIssue>* issues) {
  WetReader reader(input, gzipped);
  std::vector<WetRecord> out;
  while (auto rec = reader.next()) out.push_back(std::move(*rec));
  if (issues) *issues = reader.issues();
  return out;
}

bool looks_gzipped(std::istream& input) {
  const int b0 = input.get();
  if (b0 == std::char_traits<char>::eof()) {
    input.clear();
    return false;
  }
  const int b1 = input.peek();
  input.unget();
  return b0 == 0x1f && b1 == 0x8b;
}

std::string serialize(const WetRecord& record) {
  std::string out = record.version;
  out += "\r\n";
  for (const auto& [k, v] : record.headers) {
    out += k;
    out += ": ";
    out += v;
    out += "\r\n";
  }
  out += "\r\n";
  out += record.payload;
  out += "\r\n\r\n";
  return out;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.emplace_back(line);
    start = nl + 1;
  }
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

std::optional<WebPage> to_page(const WetRecord& record) {
  if (record.warc_type != "conversion") return std::nullopt;
  return WebPage{record.target_uri, split_lines(utf8::sanitize(record.payload))};
}

std::vector<WebPage> to_pages(const std::vector<WetRecord>& records) {
  std::vector<WebPage> pages;
  for (const auto& r : records) {
    if (auto p = to_page(r)) pages.push_back(std::move(*p));
  }
  return pages;
}

}  // namespace corpusforge::wet

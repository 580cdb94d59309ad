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


#include "corpusforge/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace corpusforge::pipeline {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr const char* kKnownFields[] = {"id",         "dataset",    "audio",    "sample_rate",
                                        "duration_s", "transcript", "speaker",  "snr_db",
                                        "cer",        "min_word_conf", "embedding", "source"};

bool is_known(const std::string& key) {
  for (const char* k : kKnownFields)
    if (key == k) return true;
  return false;
}

std::optional<double> optional_number(const ordered_json& row, const char* key) {
  auto it = row.find(key);
  if (it == row.end() || it->is_null()) return std::nullopt;
  if (!it->is_number()) throw ManifestError(ManifestErrc::BadRow, std::string(key) + " must be a number");
  return it->get<double>();
}

std::string required_string(const ordered_json& row, const char* key) {
  auto it = row.find(key);
  if (it == row.end() || !it->is_string())
    throw ManifestError(ManifestErrc::BadRow, std::string("missing string field ") + key);
  return it->get<std::string>();
}

std::string number_text(double v) { return json(v).dump(); }

}  // namespace

std::string_view to_string(Source source) {
  switch (source) {
    case Source::Annotated: return "annotated";
    case Source::RadioAsr: return "radio_asr";
    case Source::FewshotOration: return "fewshot_oration";
    case Source::FewshotInterview: return "fewshot_interview";
    case Source::FewshotRead: return "fewshot_read";
  }
  return "annotated";
}

Source parse_source(std::string_view text) {
  for (Source s : {Source::Annotated, Source::RadioAsr, Source::FewshotOration,
                   Source::FewshotInterview, Source::FewshotRead}) {
    if (to_string(s) == text) return s;
  }
  throw ManifestError(ManifestErrc::BadRow, "unknown source '" + std::string(text) + "'");
}

CorpusEntry parse_entry(std::string_view line) {
  ordered_json row;
  try {
    row = ordered_json::parse(line);
  } catch (const ordered_json::parse_error& e) {
    throw ManifestError(ManifestErrc::BadRow, e.what());
  }
  if (!row.is_object()) throw ManifestError(ManifestErrc::BadRow, "row is not an object");

  CorpusEntry e;
  e.id = required_string(row, "id");
  if (e.id.empty()) throw ManifestError(ManifestErrc::BadRow, "empty id");
  e.dataset = required_string(row, "dataset");
  e.audio = required_string(row, "audio");
  e.transcript = required_string(row, "transcript");
  if (auto it = row.find("speaker"); it != row.end() && it->is_string()) e.speaker = *it;

  auto sr = row.find("sample_rate");
  if (sr == row.end() || !sr->is_number_integer() || sr->get<long long>() <= 0)
    throw ManifestError(ManifestErrc::BadRow, "sample_rate must be a positive integer");
  e.sample_rate = sr->get<int>();

  auto dur = optional_number(row, "duration_s");
  if (!dur || !(*dur > 0.0)) throw ManifestError(ManifestErrc::BadRow, "duration_s must be > 0");
  e.duration_s = *dur;

  e.snr_db = optional_number(row, "snr_db");
  e.cer = optional_number(row, "cer");
  e.min_word_conf = optional_number(row, "min_word_conf");

  if (auto it = row.find("embedding"); it != row.end() && !it->is_null()) {
    if (it->is_string()) {
      e.embedding = it->get<std::string>();
    } else if (it->is_array()) {
      std::vector<double> values;
      for (const auto& v : *it) {
        if (!v.is_number()) throw ManifestError(ManifestErrc::BadRow, "embedding values must be numbers");
        values.push_back(v.get<double>());
      }
      e.embedding = std::move(values);
    } else {
      throw ManifestError(ManifestErrc::BadRow, "embedding must be an array, a path or null");
    }
  }

  if (auto it = row.find("source"); it != row.end() && !it->is_null()) {
    if (!it->is_string()) throw ManifestError(ManifestErrc::BadRow, "source must be a string");
    e.source = parse_source(it->get<std::string>());
  }

  for (auto it = row.begin(); it != row.end(); ++it) {
    if (!is_known(it.key())) e.extra[it.key()] = it.value();
  }
  return e;
}

std::string format_entry(const CorpusEntry& e) {
  auto optional = [](const std::optional<double>& v) {
    return v ? number_text(*v) : std::string("null");
  };
  std::string out = "{";
  auto field = [&out](std::string_view key, const std::string& value) {
    if (out.size() > 1) out += ',';
    out += json(std::string(key)).dump();
    out += ':';
    out += value;
  };
  field("id", json(e.id).dump());
  field("dataset", json(e.dataset).dump());
  field("audio", json(e.audio).dump());
  field("sample_rate", std::to_string(e.sample_rate));
  field("duration_s", number_text(e.duration_s));
  field("transcript", json(e.transcript).dump());
  field("speaker", json(e.speaker).dump());
  field("snr_db", optional(e.snr_db));
  if (e.cer) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", *e.cer);
    field("cer", buf);
  } else {
    field("cer", "null");
  }
  field("min_word_conf", optional(e.min_word_conf));
  if (!e.embedding) {
    field("embedding", "null");
  } else if (const auto* path = std::get_if<std::string>(&*e.embedding)) {
    field("embedding", json(*path).dump());
  } else {
    field("embedding", json(std::get<std::vector<double>>(*e.embedding)).dump());
  }
  field("source", json(std::string(to_string(e.source))).dump());
  for (auto it = e.extra.begin(); it != e.extra.end(); ++it) field(it.key(), it.value().dump());
  out += '}';
  return out;
}

ManifestRead read_manifest(std::istream& in) {
  ManifestRead result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      result.entries.push_back(parse_entry(line));
    } catch (const ManifestError& e) {
      result.bad_rows.push_back({lineno, e.what()});
    }
  }
  if (in.bad()) throw IoError(IoErrc::ReadFailed, "error reading manifest");
  return result;
}

ManifestRead read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrc::OpenFailed, "cannot open manifest " + path.string());
  return read_manifest(in);
}

std::vector<CorpusEntry> load_manifest(const std::filesystem::path& path) {
  auto read = read_manifest(path);
  if (!read.bad_rows.empty()) {
    const auto& b = read.bad_rows.front();
    throw ManifestError(ManifestErrc::BadRow,
                        path.string() + ":" + std::to_string(b.line) + ": " + b.message);
  }
  std::set<std::string> seen;
  for (const auto& e : read.entries) {
    if (!seen.insert(e.id).second)
      throw ManifestError(ManifestErrc::DuplicateId, "duplicate id " + e.id);
  }
  return std::move(read.entries);
}

void write_manifest(std::ostream& out, const std::vector<CorpusEntry>& entries) {
  for (const auto& e : entries) out << format_entry(e) << '\n';
}

void save_manifest(const std::filesystem::path& path, const std::vector<CorpusEntry>& entries) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrc::OpenFailed, "cannot write " + path.string());
  write_manifest(out, entries);
  if (!out) throw IoError(IoErrc::WriteFailed, "error writing " + path.string());
}

std::filesystem::path resolve_audio(const CorpusEntry& entry,
                                    const std::filesystem::path& manifest_dir) {
  std::filesystem::path p(entry.audio);
  if (p.is_absolute() || manifest_dir.empty()) return p;
  return manifest_dir / p;
}

std::string column_value(const CorpusEntry& entry, std::string_view key) {
  if (key == "dataset") return entry.dataset;
  if (key == "speaker") return entry.speaker;
  if (key == "source") return std::string(to_string(entry.source));
  if (key == "id") return entry.id;
  auto it = entry.extra.find(std::string(key));
  if (it == entry.extra.end() || it->is_null()) return "";
  return it->is_string() ? it->get<std::string>() : it->dump();
}

}  // namespace corpusforge::pipeline

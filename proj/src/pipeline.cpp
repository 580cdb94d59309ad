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


#include "corpusforge/pipeline.hpp"

#include <glob.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "corpusforge/gates.hpp"
#include "corpusforge/segmenter.hpp"
#include "corpusforge/transcriptqc.hpp"
#include "corpusforge/utf8.hpp"

namespace corpusforge::pipeline {

namespace fs = std::filesystem;

Services Services::mocks(std::size_t embed_dim) {
  bridge::ServiceEndpoint mock;
  Services s;
  s.asr = bridge::make_client(mock, bridge::mock_asr_handler);
  s.punct = bridge::make_client(mock, bridge::mock_punct_handler);
  s.embed = bridge::make_client(mock, bridge::mock_embed_handler(embed_dim));
  return s;
}

std::size_t RunReport::total_removed() const {
  std::size_t n = 0;
  for (const auto& [step, count] : removed) n += count;
  return n;
}

bool RunReport::conserved() const { return input == output + quarantined + total_removed(); }

std::string RunReport::to_text() const {
  std::ostringstream out;
  out << "input = " << input << '\n';
  out << "output = " << output << '\n';
  out << "quarantined = " << quarantined << '\n';
  for (const auto& [step, count] : removed) out << "removed." << step << " = " << count << '\n';
  return out.str();
}

namespace {

struct Outcome {
  enum class Kind { Accepted, Removed, Quarantined };
  Kind kind = Kind::Quarantined;
  CorpusEntry entry;
  std::string step;
  std::string reason;
};

Outcome removed(const CorpusEntry& e, std::string step, std::string reason) {
  return {Outcome::Kind::Removed, e, std::move(step), std::move(reason)};
}

std::string file_stem_for(const std::string& id) {
  std::string s = id;
  for (char& c : s)
    if (c == '/' || c == '\\' || c == ':') c = '_';
  return s;
}

struct Candidate {
  CorpusEntry entry;
  fs::path audio;
};

class EntryProcessor {
 public:
  EntryProcessor(const PipelineConfig& cfg, const Services& services, const RunOptions& opts,
                 const std::optional<speaker::SpeakerEmbedding>& reference)
      : cfg_(cfg),
        services_(services),
        opts_(opts),
        table_(opts.snr_table ? *opts.snr_table : audioqc::default_snr_table()),
        reference_(reference) {}

  Outcome operator()(const Candidate& c) const {
    try {
      return process(c.entry, c.audio);
    } catch (const std::exception& ex) {
      return {Outcome::Kind::Quarantined, c.entry, "", ex.what()};
    }
  }

 private:
  Outcome process(const CorpusEntry& in, const fs::path& path) const {
    const AudioRecord audio = read_wav(path);
    if (audio.sample_rate != in.sample_rate) {
      return {Outcome::Kind::Quarantined, in, "",
              "sample_rate mismatch: manifest " + std::to_string(in.sample_rate) + ", file " +
                  std::to_string(audio.sample_rate)};
    }
    CorpusEntry e = in;

    // Step 1: trim edge pauses using the ASR alignment.
    const auto asr = bridge::transcribe(*services_.asr, path);
    e.min_word_conf = bridge::min_word_confidence(asr);
    if (in.source == Source::RadioAsr && *e.min_word_conf < cfg_.word_conf_min) {
      return removed(e, "asr_confidence", "min_word_conf below word_conf_min");
    }
    const auto span = audioqc::trim_span(audio, asr.words, cfg_.trim_max_pause_s);
    const AudioRecord trimmed = audio.slice(span.first, span.last);

    // Step 2.
    e.snr_db = audioqc::estimate_snr_wada(trimmed, table_);
    if (auto v = audioqc::snr_gate(*e.snr_db, cfg_.snr_min_db); !v.pass)
      return removed(e, "snr", v.reason);

    // Step 3. References with nothing left after normalization skip the
    // gate and fall to the empty-transcript check.
    if (!transcript::normalize_for_cer(in.transcript).empty()) {
      e.cer = transcript::validation_cer(asr.text, in.transcript);
      if (!transcript::passes_cer(*e.cer, cfg_.cer_max)) return removed(e, "cer", "cer");
    } else {
      e.cer.reset();
    }

    // Steps 4 and 5.
    std::string text = in.transcript;
    if (!utf8::split_words(text).empty()) {
      text = transcript::ensure_terminal_punct(bridge::punctuate(*services_.punct, text));
    }
    e.transcript = transcript::normalize_transcript(text);

    // Step 6.
    e.duration_s = trimmed.duration_s();
    if (auto v = audioqc::duration_gate(e.duration_s, cfg_.dur_min_s, cfg_.dur_max_s); !v.pass)
      return removed(e, "duration", v.reason);
    if (auto v = audioqc::transcript_gate(e.transcript); !v.pass)
      return removed(e, "empty_transcript", v.reason);

    // Step 7.
    const fs::path out = fs::absolute(opts_.audio_out / (file_stem_for(e.id) + ".wav"));
    write_wav(out, trimmed);
    bridge::AsrResult shifted = asr;
    const double offset = static_cast<double>(span.first) / audio.sample_rate;
    for (auto& w : shifted.words) {
      w.start_s = std::max(0.0, w.start_s - offset);
      w.end_s = std::max(w.start_s, w.end_s - offset);
    }
    bridge::write_words_sidecar(out, shifted);
    e.audio = out.string();
    e.sample_rate = trimmed.sample_rate;

    const auto emb =
        bridge::embed(*services_.embed, out, static_cast<std::size_t>(cfg_.embed_dim));
    if (reference_ && !speaker::verify(emb, *reference_, cfg_.verify_tau).accepted) {
      std::error_code ec;
      fs::remove(out, ec);
      fs::remove(bridge::words_sidecar(out), ec);
      return removed(e, "speaker", "cosine below verify_tau");
    }
    if (opts_.embed_dir) {
      const fs::path p = fs::absolute(*opts_.embed_dir / (file_stem_for(e.id) + ".spke"));
      speaker::write_embedding(p, emb);
      e.embedding = p.string();
    } else {
      e.embedding = emb.values();
    }
    return {Outcome::Kind::Accepted, std::move(e), "", ""};
  }

  const PipelineConfig& cfg_;
  const Services& services_;
  const RunOptions& opts_;
  const audioqc::SnrTable& table_;
  const std::optional<speaker::SpeakerEmbedding>& reference_;
};

void require_services(const Services& s) {
  if (!s.asr || !s.punct || !s.embed)
    throw PipelineError(PipelineErrc::MissingService, "asr, punctuation and embedding services are required");
}

std::vector<Outcome> process_all(const std::vector<Candidate>& candidates,
                                 const EntryProcessor& processor, int jobs) {
  std::vector<Outcome> outcomes(candidates.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < candidates.size(); i = next++) {
      outcomes[i] = processor(candidates[i]);
    }
  };
  const auto width = static_cast<std::size_t>(std::max(1, jobs));
  if (width == 1 || candidates.size() < 2) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < std::min(width, candidates.size()); ++t) pool.emplace_back(work);
  }
  return outcomes;
}

void collect(std::vector<Outcome>&& outcomes, RunResult& result) {
  for (auto& o : outcomes) {
    switch (o.kind) {
      case Outcome::Kind::Accepted:
        result.accepted.push_back(std::move(o.entry));
        break;
      case Outcome::Kind::Removed:
        ++result.report.removed[o.step];
        result.removals.push_back({o.entry.id, o.step, o.reason});
        break;
      case Outcome::Kind::Quarantined:
        result.quarantine.push_back({o.entry.id, o.reason});
        break;
    }
  }
}

void finish(RunResult& result) {
  std::sort(result.accepted.begin(), result.accepted.end(),
            [](const CorpusEntry& a, const CorpusEntry& b) { return a.id < b.id; });
  std::stable_sort(result.removals.begin(), result.removals.end(),
                   [](const Removal& a, const Removal& b) { return a.id < b.id; });
  std::stable_sort(result.quarantine.begin(), result.quarantine.end(),
                   [](const Quarantined& a, const Quarantined& b) { return a.id < b.id; });
  result.report.output = result.accepted.size();
  result.report.quarantined = result.quarantine.size();
}

RunResult run_candidates(std::vector<Candidate> candidates, RunResult result,
                         const PipelineConfig& cfg, const Services& services,
                         const RunOptions& opts,
                         const std::optional<speaker::SpeakerEmbedding>& reference) {
  // Later rows reusing an id are quarantined; the first one is processed.
  std::set<std::string> seen;
  std::vector<Candidate> unique;
  for (auto& c : candidates) {
    if (!seen.insert(c.entry.id).second) {
      result.quarantine.push_back({c.entry.id, "duplicate id"});
    } else {
      unique.push_back(std::move(c));
    }
  }
  if (!unique.empty()) fs::create_directories(opts.audio_out);
  if (opts.embed_dir && !unique.empty()) fs::create_directories(*opts.embed_dir);
  EntryProcessor processor(cfg, services, opts, reference);
  collect(process_all(unique, processor, opts.jobs), result);
  finish(result);
  return result;
}

}  // namespace

RunResult run_finetune_qc(const std::vector<CorpusEntry>& entries, const PipelineConfig& cfg,
                          const Services& services, const RunOptions& opts) {
  ManifestRead read;
  read.entries = entries;
  return run_finetune_qc(read, cfg, services, opts);
}

RunResult run_finetune_qc(const ManifestRead& manifest, const PipelineConfig& cfg,
                          const Services& services, const RunOptions& opts) {
  cfg.validate();
  RunResult result;
  result.report.input = manifest.entries.size() + manifest.bad_rows.size();
  for (const auto& bad : manifest.bad_rows)
    result.quarantine.push_back({"line:" + std::to_string(bad.line), bad.message});
  if (manifest.entries.empty()) {
    finish(result);
    return result;
  }
  require_services(services);
  std::vector<Candidate> candidates;
  for (const auto& e : manifest.entries)
    candidates.push_back({e, resolve_audio(e, opts.manifest_dir)});
  return run_candidates(std::move(candidates), std::move(result), cfg, services, opts,
                        std::nullopt);
}

VoiceType parse_voice_type(std::string_view text) {
  if (text == "oration") return VoiceType::Oration;
  if (text == "interview") return VoiceType::Interview;
  if (text == "read") return VoiceType::Read;
  throw ConfigError(ConfigErrc::BadValue, "unknown voice type '" + std::string(text) + "'");
}

std::string_view to_string(VoiceType type) {
  switch (type) {
    case VoiceType::Oration: return "oration";
    case VoiceType::Interview: return "interview";
    case VoiceType::Read: return "read";
  }
  return "oration";
}

namespace {

Source source_for(VoiceType type) {
  switch (type) {
    case VoiceType::Oration: return Source::FewshotOration;
    case VoiceType::Interview: return Source::FewshotInterview;
    case VoiceType::Read: return Source::FewshotRead;
  }
  return Source::FewshotOration;
}

std::string segment_id(const std::string& stem, std::size_t k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "_%03zu", k);
  return stem + buf;
}

std::optional<std::string> read_text_sidecar(const fs::path& audio) {
  fs::path p = audio;
  p.replace_extension(".txt");
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::stringstream ss;
  ss << in.rdbuf();
  return utf8::collapse_whitespace(utf8::sanitize(ss.str()));
}

std::vector<Candidate> split_recording(const fs::path& path, const FewshotRequest& req,
                                       const PipelineConfig& cfg, const Services& services,
                                       const fs::path& segment_dir) {
  const AudioRecord audio = read_wav(path);
  const auto asr = bridge::transcribe(*services.asr, path);
  const std::string punctuated =
      transcript::ensure_terminal_punct(bridge::punctuate(*services.punct, asr.text));
  const WordList words = segment::apply_punctuation(asr.words, punctuated);

  std::vector<segment::PauseCut> cuts;
  if (words.size() >= 2) cuts = segment::score_pauses(words, cfg.cut_bonus_s);
  segment::SegmentationOptions so;
  so.max_len_s = cfg.dur_max_s;
  so.cut_penalty = cfg.cut_penalty_s;
  so.max_edge_pause_s = cfg.trim_max_pause_s;
  const auto segments = segment::optimal_segmentation(words, cuts, audio.duration_s(), so);
  const auto sliced = segment::slice_record(audio, asr.words, segments);

  const std::string stem = path.stem().string();
  std::vector<Candidate> out;
  for (std::size_t k = 0; k < sliced.size(); ++k) {
    CorpusEntry e;
    e.id = segment_id(stem, k);
    e.dataset = req.dataset;
    e.sample_rate = audio.sample_rate;
    e.duration_s = sliced[k].audio.duration_s();
    e.transcript = sliced[k].transcript;
    e.speaker = req.speaker;
    e.source = source_for(req.type);
    const fs::path seg_path = fs::absolute(segment_dir / (e.id + ".wav"));
    write_wav(seg_path, sliced[k].audio);
    bridge::AsrResult part;
    part.words = sliced[k].words;
    for (const auto& w : part.words) {
      if (!part.text.empty()) part.text.push_back(' ');
      part.text += w.word;
    }
    bridge::write_words_sidecar(seg_path, part);
    e.audio = seg_path.string();
    out.push_back({std::move(e), seg_path});
  }
  return out;
}

}  // namespace

RunResult run_fewshot_collect(const FewshotRequest& req, const PipelineConfig& cfg,
                              const Services& services, const RunOptions& opts) {
  cfg.validate();
  if (req.type == VoiceType::Interview && !req.reference) {
    throw PipelineError(PipelineErrc::MissingReference,
                        "interview collection needs a reference recording of the target speaker");
  }
  require_services(services);

  std::optional<speaker::SpeakerEmbedding> reference;
  if (req.type == VoiceType::Interview) {
    reference = bridge::embed(*services.embed, *req.reference,
                              static_cast<std::size_t>(cfg.embed_dim));
  }

  RunResult result;
  std::vector<Candidate> candidates;
  const fs::path segment_dir = opts.audio_out / "segments";
  for (const auto& path : req.audio) {
    try {
      if (req.type == VoiceType::Read) {
        const AudioRecord audio = read_wav(path);
        CorpusEntry e;
        e.id = path.stem().string();
        e.dataset = req.dataset;
        e.audio = fs::absolute(path).string();
        e.sample_rate = audio.sample_rate;
        e.duration_s = audio.duration_s();
        e.speaker = req.speaker;
        e.source = Source::FewshotRead;
        if (auto text = read_text_sidecar(path)) {
          e.transcript = *text;
        } else {
          e.transcript = bridge::transcribe(*services.asr, path).text;
        }
        candidates.push_back({std::move(e), path});
      } else {
        fs::create_directories(segment_dir);
        auto parts = split_recording(path, req, cfg, services, segment_dir);
        for (auto& p : parts) candidates.push_back(std::move(p));
      }
    } catch (const std::exception& ex) {
      result.quarantine.push_back({path.stem().string(), ex.what()});
    }
  }
  result.report.input = candidates.size() + result.quarantine.size();
  return run_candidates(std::move(candidates), std::move(result), cfg, services, opts,
                        reference);
}

// ---------------------------------------------------------------------------

double round_hours(double hours) { return std::round(hours * 10.0) / 10.0; }

std::vector<StatsTable> compute_stats(const std::vector<CorpusEntry>& entries,
                                      std::string_view split_key) {
  std::vector<StatsTable> tables;
  std::unordered_map<std::string, std::size_t> table_index;
  std::vector<std::unordered_map<std::string, std::size_t>> row_index;
  for (const auto& e : entries) {
    const std::string split = split_key.empty() ? "" : column_value(e, split_key);
    auto [tit, fresh] = table_index.try_emplace(split, tables.size());
    if (fresh) {
      tables.push_back({split, {}, {"TOTAL", 0.0, 0, 0}});
      row_index.emplace_back();
    }
    auto& table = tables[tit->second];
    auto& rows = row_index[tit->second];
    auto [rit, new_row] = rows.try_emplace(e.dataset, table.rows.size());
    if (new_row) table.rows.push_back({e.dataset, 0.0, 0, 0});
    auto& row = table.rows[rit->second];
    const std::size_t words = utf8::count_words(e.transcript);
    row.seconds += e.duration_s;
    row.files += 1;
    row.words += words;
  }
  for (auto& t : tables) {
    for (const auto& r : t.rows) {
      t.total.seconds += r.seconds;
      t.total.files += r.files;
      t.total.words += r.words;
    }
  }
  if (tables.empty()) tables.push_back({"", {}, {"TOTAL", 0.0, 0, 0}});
  return tables;
}

std::string format_stats(const StatsTable& table) {
  std::ostringstream out;
  auto line = [&out](const StatsRow& r) {
    char hours[64];
    std::snprintf(hours, sizeof hours, "%.1f", round_hours(r.hours()));
    out << r.dataset << '\t' << hours << '\t' << r.files << '\t' << r.words << '\n';
  };
  out << "dataset\thours\tfiles\twords\n";
  for (const auto& r : table.rows) line(r);
  line(table.total);
  return out.str();
}

// ---------------------------------------------------------------------------

std::vector<wet::WebPage> read_pages(const fs::path& path, std::vector<wet::ParseIssue>* issues) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(IoErrc::OpenFailed, "cannot open " + path.string());
  if (wet::looks_gzipped(in)) return wet::to_pages(wet::read_wet_stream(in, true, issues));
  char head[5] = {};
  in.read(head, 5);
  const bool is_wet = in.gcount() == 5 && std::string_view(head, 5) == "WARC/";
  in.clear();
  in.seekg(0);
  if (is_wet) return wet::to_pages(wet::read_wet_stream(in, false, issues));
  return text::read_clean_pages(in);
}

TextRunResult run_clean_text(const std::vector<fs::path>& inputs, const text::CleanConfig& cfg,
                             const text::LanguageClassifier& classifier, text::DedupStore& store) {
  cfg.validate();
  TextRunResult result;
  for (const auto& path : inputs) {
    for (const auto& page : read_pages(path, &result.issues)) {
      if (auto cleaned = text::clean_page(page, cfg, classifier, store, result.report)) {
        result.pages.push_back(std::move(*cleaned));
      }
    }
  }
  return result;
}

std::vector<fs::path> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<fs::path> out;
  const int rc = ::glob(pattern.c_str(), 0, nullptr, &g);
  if (rc == 0) {
    for (std::size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  ::globfree(&g);
  if (rc == GLOB_NOMATCH) throw IoError(IoErrc::OpenFailed, "no files match " + pattern);
  if (rc != 0) throw IoError(IoErrc::ReadFailed, "glob failed for " + pattern);
  return out;
}

}  // namespace corpusforge::pipeline

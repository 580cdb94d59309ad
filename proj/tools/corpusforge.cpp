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


// corpusforge: command-line front end for the corpus pipelines.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "corpusforge/audioqc.hpp"
#include "corpusforge/bridge.hpp"
#include "corpusforge/config.hpp"
#include "corpusforge/langid.hpp"
#include "corpusforge/manifest.hpp"
#include "corpusforge/pipeline.hpp"
#include "corpusforge/segmenter.hpp"
#include "corpusforge/textclean.hpp"
#include "corpusforge/transcriptqc.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace corpusforge;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitQuarantine = 3;

struct GlobalOptions {
  std::string config_path;
  int jobs = 1;
  std::string quarantine_path;
  bool strict = false;
  double timeout_s = 30.0;
};

struct ServiceOptions {
  std::string asr = "mock";
  std::string punct = "mock";
  std::string embed = "mock";
};

void add_service_flags(CLI::App* cmd, ServiceOptions& s) {
  cmd->add_option("--asr", s.asr, "ASR endpoint: mock, exec:<command> or an http URL");
  cmd->add_option("--punct", s.punct, "punctuation endpoint");
  cmd->add_option("--embed", s.embed, "speaker-embedding endpoint");
}

pipeline::Services make_services(const ServiceOptions& s, const GlobalOptions& g,
                                 const pipeline::PipelineConfig& cfg) {
  auto endpoint = [&g](const std::string& text) {
    auto ep = bridge::parse_endpoint(text, g.timeout_s);
    ep.max_in_flight = std::max(1, g.jobs);
    return ep;
  };
  pipeline::Services out;
  out.asr = bridge::make_client(endpoint(s.asr), bridge::mock_asr_handler);
  out.punct = bridge::make_client(endpoint(s.punct), bridge::mock_punct_handler);
  out.embed = bridge::make_client(endpoint(s.embed),
                                  bridge::mock_embed_handler(static_cast<std::size_t>(cfg.embed_dim)));
  return out;
}

pipeline::PipelineConfig load_config(const GlobalOptions& g) {
  if (g.config_path.empty()) return {};
  return pipeline::load_config(g.config_path);
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(IoErrc::OpenFailed, "cannot write " + path.string());
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) return;
  auto out = open_out(path);
  out << text;
}

std::vector<fs::path> expand_all(const std::vector<std::string>& patterns) {
  std::vector<fs::path> out;
  for (const auto& p : patterns) {
    if (p.find_first_of("*?[") == std::string::npos) {
      out.emplace_back(p);
    } else {
      for (auto& f : pipeline::expand_glob(p)) out.push_back(std::move(f));
    }
  }
  return out;
}

int finish_run(const pipeline::RunResult& r, const GlobalOptions& g, const std::string& output,
               const std::string& removals, const std::string& report) {
  {
    auto out = open_out(output);
    pipeline::write_manifest(out, r.accepted);
  }
  if (!removals.empty()) {
    auto out = open_out(removals);
    for (const auto& rm : r.removals)
      out << json{{"id", rm.id}, {"step", rm.step}, {"reason", rm.reason}}.dump() << '\n';
  }
  if (!g.quarantine_path.empty()) {
    auto out = open_out(g.quarantine_path);
    for (const auto& q : r.quarantine) out << json{{"id", q.id}, {"reason", q.reason}}.dump() << '\n';
  }
  if (report.empty()) {
    std::cerr << r.report.to_text();
  } else {
    write_text(report, r.report.to_text());
  }
  for (const auto& q : r.quarantine) std::cerr << "quarantined " << q.id << ": " << q.reason << '\n';
  if (g.strict && !r.quarantine.empty()) return kExitQuarantine;
  return kExitOk;
}

const audioqc::SnrTable* table_or_default(const std::string& path,
                                          std::optional<audioqc::SnrTable>& storage) {
  if (path.empty()) return nullptr;
  storage = audioqc::SnrTable::load(path);
  return &*storage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Speech and text corpus preparation tools"};
  app.require_subcommand(1);
  GlobalOptions g;
  app.add_option("--config", g.config_path, "pipeline configuration file (key = value)");
  app.add_option("--jobs", g.jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--quarantine", g.quarantine_path, "write quarantined entries here (JSONL)");
  app.add_flag("--strict", g.strict, "exit with status 3 when anything was quarantined");
  app.add_option("--timeout", g.timeout_s, "per-request service timeout in seconds")
      ->check(CLI::PositiveNumber);

  // clean-text
  auto* clean = app.add_subcommand("clean-text", "clean Common Crawl WET archives");
  std::vector<std::string> clean_inputs;
  std::string clean_output, clean_report, clean_rows, clean_blacklist, clean_store;
  std::string clean_lang = "cs";
  clean->add_option("--input", clean_inputs, "WET files, gzipped WET files or cleaned text (globs allowed)")
      ->required();
  clean->add_option("--output", clean_output, "cleaned text output")->required();
  clean->add_option("--report", clean_report, "key = value report");
  clean->add_option("--rows", clean_rows, "per-rule removal counts as JSONL");
  clean->add_option("--blacklist", clean_blacklist, "one blacklisted word or phrase per line");
  clean->add_option("--lang", clean_lang, "target language code");
  clean->add_option("--dedup-store", clean_store, "fingerprint store to load and update");

  // qc-finetune
  auto* qc = app.add_subcommand("qc-finetune", "quality-check a fine-tuning manifest");
  std::string qc_manifest, qc_output, qc_audio_out, qc_embed_dir, qc_removals, qc_report, qc_table;
  ServiceOptions qc_services;
  qc->add_option("--manifest", qc_manifest, "input manifest (JSONL)")->required();
  qc->add_option("--output", qc_output, "output manifest")->required();
  qc->add_option("--audio-out", qc_audio_out, "directory for trimmed audio")->required();
  qc->add_option("--embed-dir", qc_embed_dir, "store embeddings as SPKE files here");
  qc->add_option("--removals", qc_removals, "removal records (JSONL)");
  qc->add_option("--report", qc_report, "key = value report");
  qc->add_option("--snr-table", qc_table, "precomputed WADA table");
  add_service_flags(qc, qc_services);

  // collect-fewshot
  auto* fs_cmd = app.add_subcommand("collect-fewshot", "build a few-shot corpus for one speaker");
  std::vector<std::string> fs_audio;
  std::string fs_type = "oration", fs_reference, fs_speaker, fs_dataset = "fewshot";
  std::string fs_output, fs_audio_out, fs_embed_dir, fs_removals, fs_report, fs_table;
  ServiceOptions fs_services;
  fs_cmd->add_option("--audio", fs_audio, "input recordings (globs allowed)")->required();
  fs_cmd->add_option("--type", fs_type, "oration, interview or read")
      ->check(CLI::IsMember({"oration", "interview", "read"}));
  fs_cmd->add_option("--reference", fs_reference, "reference recording of the target speaker");
  fs_cmd->add_option("--speaker", fs_speaker, "speaker name")->required();
  fs_cmd->add_option("--dataset", fs_dataset, "dataset name written to the manifest");
  fs_cmd->add_option("--output", fs_output, "output manifest")->required();
  fs_cmd->add_option("--audio-out", fs_audio_out, "directory for segments")->required();
  fs_cmd->add_option("--embed-dir", fs_embed_dir, "store embeddings as SPKE files here");
  fs_cmd->add_option("--removals", fs_removals, "removal records (JSONL)");
  fs_cmd->add_option("--report", fs_report, "key = value report");
  fs_cmd->add_option("--snr-table", fs_table, "precomputed WADA table");
  add_service_flags(fs_cmd, fs_services);

  // segment
  auto* seg = app.add_subcommand("segment", "segment one aligned recording");
  std::string seg_words, seg_audio, seg_output, seg_out_dir, seg_parent = "rec";
  std::string seg_punct;
  double seg_duration = 0.0;
  seg->add_option("--words", seg_words, "ASR result JSON with word timestamps")->required();
  seg->add_option("--audio", seg_audio, "recording to slice (also gives the duration)");
  seg->add_option("--duration", seg_duration, "recording duration when --audio is absent");
  seg->add_option("--punct", seg_punct, "punctuation endpoint applied before scoring");
  seg->add_option("--parent", seg_parent, "parent record id written to each row");
  seg->add_option("--output", seg_output, "segment rows (JSONL); stdout when absent");
  seg->add_option("--out-dir", seg_out_dir, "write sliced audio here (needs --audio)");

  // stats
  auto* stats = app.add_subcommand("stats", "hours, files and words per dataset");
  std::string stats_manifest, stats_split;
  stats->add_option("--manifest", stats_manifest, "manifest (JSONL)")->required();
  stats->add_option("--split", stats_split, "column that separates tables, e.g. split");

  // snr-table
  auto* snr = app.add_subcommand("snr-table", "build the WADA-SNR lookup table");
  std::string snr_output;
  double snr_shape = audioqc::SnrTable::kDefaultShape;
  std::size_t snr_samples = 1'000'000;
  unsigned long long snr_seed = 20240613;
  snr->add_option("--output", snr_output, "table file")->required();
  snr->add_option("--shape", snr_shape, "gamma shape of the speech amplitudes");
  snr->add_option("--samples", snr_samples, "Monte Carlo samples per grid point");
  snr->add_option("--seed", snr_seed, "random seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto cfg = load_config(g);

    if (*clean) {
      text::CleanConfig cc;
      cc.lang = clean_lang;
      cc.lang_prob_min = cfg.lang_prob_min;
      if (!clean_blacklist.empty()) {
        std::ifstream in(clean_blacklist);
        if (!in) throw IoError(IoErrc::OpenFailed, "cannot open " + clean_blacklist);
        cc.blacklist = text::load_blacklist(in);
      }
      text::MemoryDedupStore store;
      if (!clean_store.empty() && fs::exists(clean_store)) store.load(clean_store);
      const auto classifier = text::NgramLanguageClassifier::with_default_profiles();
      auto result = pipeline::run_clean_text(expand_all(clean_inputs), cc, classifier, store);
      {
        auto out = open_out(clean_output);
        text::write_clean_pages(out, result.pages);
      }
      if (!clean_store.empty()) store.save(clean_store);
      if (clean_report.empty()) {
        std::cerr << result.report.to_text();
      } else {
        write_text(clean_report, result.report.to_text());
      }
      write_text(clean_rows, result.report.to_rows());
      for (const auto& issue : result.issues) {
        std::cerr << "skipped record " << issue.record_ordinal << ": " << to_string(issue.kind)
                  << ": " << issue.detail << '\n';
      }
      return kExitOk;
    }

    if (*qc) {
      const auto manifest = pipeline::read_manifest(fs::path(qc_manifest));
      std::optional<audioqc::SnrTable> table;
      pipeline::RunOptions opts;
      opts.audio_out = qc_audio_out;
      opts.manifest_dir = fs::path(qc_manifest).parent_path();
      if (!qc_embed_dir.empty()) opts.embed_dir = fs::path(qc_embed_dir);
      opts.jobs = g.jobs;
      opts.snr_table = table_or_default(qc_table, table);
      const auto services = make_services(qc_services, g, cfg);
      const auto result = pipeline::run_finetune_qc(manifest, cfg, services, opts);
      return finish_run(result, g, qc_output, qc_removals, qc_report);
    }

    if (*fs_cmd) {
      pipeline::FewshotRequest req;
      req.audio = expand_all(fs_audio);
      req.type = pipeline::parse_voice_type(fs_type);
      if (!fs_reference.empty()) req.reference = fs::path(fs_reference);
      req.speaker = fs_speaker;
      req.dataset = fs_dataset;
      std::optional<audioqc::SnrTable> table;
      pipeline::RunOptions opts;
      opts.audio_out = fs_audio_out;
      if (!fs_embed_dir.empty()) opts.embed_dir = fs::path(fs_embed_dir);
      opts.jobs = g.jobs;
      opts.snr_table = table_or_default(fs_table, table);
      const auto services = make_services(fs_services, g, cfg);
      const auto result = pipeline::run_fewshot_collect(req, cfg, services, opts);
      return finish_run(result, g, fs_output, fs_removals, fs_report);
    }

    if (*seg) {
      std::ifstream in(seg_words);
      if (!in) throw IoError(IoErrc::OpenFailed, "cannot open " + seg_words);
      json body = json::parse(in, nullptr, false);
      if (body.is_discarded()) throw IoError(IoErrc::BadFormat, seg_words + " is not JSON");
      const auto asr = bridge::parse_asr_response(body);
      std::optional<AudioRecord> audio;
      if (!seg_audio.empty()) audio = read_wav(seg_audio);
      const double duration = audio ? audio->duration_s() : seg_duration;
      if (!(duration > 0.0)) {
        throw pipeline::ConfigError(pipeline::ConfigErrc::BadValue,
                                    "segment needs --audio or a positive --duration");
      }
      WordList words = asr.words;
      if (!seg_punct.empty()) {
        auto client = bridge::make_client(bridge::parse_endpoint(seg_punct, g.timeout_s),
                                          bridge::mock_punct_handler);
        words = segment::apply_punctuation(
            words, transcript::ensure_terminal_punct(bridge::punctuate(*client, asr.text)));
      } else {
        words = segment::apply_punctuation(words, asr.text);
      }
      std::vector<segment::PauseCut> cuts;
      if (words.size() >= 2) cuts = segment::score_pauses(words, cfg.cut_bonus_s);
      segment::SegmentationOptions so;
      so.max_len_s = cfg.dur_max_s;
      so.cut_penalty = cfg.cut_penalty_s;
      so.max_edge_pause_s = cfg.trim_max_pause_s;
      const auto segments = segment::optimal_segmentation(words, cuts, duration, so);

      std::optional<std::ofstream> file;
      if (!seg_output.empty()) file = open_out(seg_output);
      std::ostream& out = file ? static_cast<std::ostream&>(*file) : std::cout;
      std::vector<segment::SlicedSegment> sliced;
      if (!seg_out_dir.empty()) {
        if (!audio) {
          throw pipeline::ConfigError(pipeline::ConfigErrc::BadValue, "--out-dir needs --audio");
        }
        fs::create_directories(seg_out_dir);
        sliced = segment::slice_record(*audio, words, segments);
      }
      for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& s = segments[k];
        json row = {{"parent", seg_parent}, {"index", k},
                    {"first_word", s.first_word}, {"last_word", s.last_word},
                    {"start_s", s.start_s}, {"end_s", s.end_s},
                    {"transcript", s.transcript}};
        if (!sliced.empty()) {
          char name[32];
          std::snprintf(name, sizeof name, "_%03zu.wav", k);
          const fs::path p = fs::path(seg_out_dir) / (seg_parent + name);
          write_wav(p, sliced[k].audio);
          row["audio"] = p.string();
        }
        out << row.dump() << '\n';
      }
      return kExitOk;
    }

    if (*stats) {
      const auto entries = pipeline::load_manifest(stats_manifest);
      for (const auto& table : pipeline::compute_stats(entries, stats_split)) {
        if (!stats_split.empty()) std::cout << "# " << stats_split << " = " << table.split << '\n';
        std::cout << pipeline::format_stats(table);
      }
      return kExitOk;
    }

    if (*snr) {
      const auto table = audioqc::build_snr_table(snr_shape, snr_samples, snr_seed);
      table.save(snr_output);
      return kExitOk;
    }
  } catch (const pipeline::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const pipeline::PipelineError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const text::TextError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == text::TextErrc::InvalidConfig ? kExitConfig : kExitIo;
  } catch (const bridge::BridgeError& e) {
    std::cerr << "service error: " << e.what() << '\n';
    return e.kind() == bridge::BridgeErrc::BadEndpoint ? kExitConfig : kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitOk;
}

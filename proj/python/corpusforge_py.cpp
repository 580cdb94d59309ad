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


#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "corpusforge/audioqc.hpp"
#include "corpusforge/langid.hpp"
#include "corpusforge/pipeline.hpp"
#include "corpusforge/segmenter.hpp"
#include "corpusforge/speakerid.hpp"
#include "corpusforge/textclean.hpp"
#include "corpusforge/transcriptqc.hpp"
#include "corpusforge/utf8.hpp"

namespace py = pybind11;
using namespace corpusforge;

namespace {

py::dict report_dict(const text::CleanReport& r) {
  py::dict d;
  d["pages_examined"] = r.pages_examined;
  d["pages_retained"] = r.pages_retained;
  d["lines_examined"] = r.lines_examined;
  d["lines_retained"] = r.lines_retained;
  py::dict lines, pages;
  for (int k = 0; k < text::kRuleCount; ++k) {
    lines[py::int_(k + 1)] = r.lines_removed[k];
    pages[py::int_(k + 1)] = r.pages_removed[k];
  }
  d["lines_removed"] = lines;
  d["pages_removed"] = pages;
  return d;
}

py::list stats_list(const std::vector<pipeline::StatsTable>& tables) {
  py::list out;
  for (const auto& t : tables) {
    py::list rows;
    auto row = [](const pipeline::StatsRow& r) {
      return py::dict(py::arg("dataset") = r.dataset, py::arg("hours") = r.hours(),
                      py::arg("files") = r.files, py::arg("words") = r.words);
    };
    for (const auto& r : t.rows) rows.append(row(r));
    out.append(py::dict(py::arg("split") = t.split, py::arg("rows") = rows,
                        py::arg("total") = row(t.total)));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_corpusforge, m) {
  m.doc() = "Speech and text corpus preparation: cleaning, QC, segmentation, statistics.";

  static py::exception<Error> error(m, "CorpusforgeError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      PyErr_SetString(error.ptr(), e.what());
    }
  });

  py::class_<WordAlignment>(m, "Word")
      .def(py::init([](std::string word, double start_s, double end_s, double confidence,
                       bool terminal_after) {
             return WordAlignment{std::move(word), start_s, end_s, confidence, terminal_after};
           }),
           py::arg("word"), py::arg("start_s"), py::arg("end_s"), py::arg("confidence") = 1.0,
           py::arg("terminal_after") = false)
      .def_readwrite("word", &WordAlignment::word)
      .def_readwrite("start_s", &WordAlignment::start_s)
      .def_readwrite("end_s", &WordAlignment::end_s)
      .def_readwrite("confidence", &WordAlignment::confidence)
      .def_readwrite("terminal_after", &WordAlignment::terminal_after)
      .def("__repr__", [](const WordAlignment& w) {
        return "Word(" + py::repr(py::str(w.word)).cast<std::string>() + ", " +
               std::to_string(w.start_s) + ", " + std::to_string(w.end_s) + ")";
      });

  py::class_<segment::Segment>(m, "Segment")
      .def_readonly("first_word", &segment::Segment::first_word)
      .def_readonly("last_word", &segment::Segment::last_word)
      .def_readonly("start_s", &segment::Segment::start_s)
      .def_readonly("end_s", &segment::Segment::end_s)
      .def_readonly("transcript", &segment::Segment::transcript);

  m.def("char_error_rate", &transcript::char_error_rate, py::arg("hypothesis"),
        py::arg("reference"));
  m.def("validation_cer", &transcript::validation_cer, py::arg("hypothesis"),
        py::arg("reference"));
  m.def("normalize_for_cer", &transcript::normalize_for_cer, py::arg("text"));
  m.def(
      "normalize_transcript",
      [](std::string_view text) { return transcript::normalize_transcript(text); },
      py::arg("text"));
  m.def("ensure_terminal_punct", &transcript::ensure_terminal_punct, py::arg("text"));

  m.def(
      "estimate_snr",
      [](std::vector<float> samples, int sample_rate) {
        AudioRecord r{std::move(samples), sample_rate};
        py::gil_scoped_release release;
        return audioqc::estimate_snr_wada(r, audioqc::default_snr_table());
      },
      py::arg("samples"), py::arg("sample_rate") = 16000,
      "Blind WADA-SNR estimate in dB, clamped to the table range.");

  m.def(
      "score_pauses",
      [](const WordList& words, double terminal_bonus_s) {
        py::list out;
        for (const auto& c : segment::score_pauses(words, terminal_bonus_s)) {
          out.append(py::dict(py::arg("index") = c.index, py::arg("duration_s") = c.duration_s,
                              py::arg("terminal") = c.terminal, py::arg("score") = c.score));
        }
        return out;
      },
      py::arg("words"), py::arg("terminal_bonus_s") = 2.0);

  auto options = [](double max_len_s, double cut_penalty) {
    segment::SegmentationOptions o;
    o.max_len_s = max_len_s;
    o.cut_penalty = cut_penalty;
    return o;
  };
  m.def(
      "choose_cuts",
      [options](const WordList& words, double max_len_s, double cut_penalty,
                double terminal_bonus_s) {
        const auto s = segment::choose_cuts(words, segment::score_pauses(words, terminal_bonus_s),
                                            options(max_len_s, cut_penalty));
        return py::make_tuple(s.cuts, s.objective);
      },
      py::arg("words"), py::arg("max_len_s") = 30.0, py::arg("cut_penalty") = 1.0,
      py::arg("terminal_bonus_s") = 2.0,
      "Optimal cut positions (word indices) and the objective value.");
  m.def(
      "optimal_segmentation",
      [options](const WordList& words, double duration_s, double max_len_s, double cut_penalty,
                double terminal_bonus_s) {
        std::vector<segment::PauseCut> cuts;
        if (words.size() >= 2) cuts = segment::score_pauses(words, terminal_bonus_s);
        return segment::optimal_segmentation(words, cuts, duration_s,
                                             options(max_len_s, cut_penalty));
      },
      py::arg("words"), py::arg("duration_s"), py::arg("max_len_s") = 30.0,
      py::arg("cut_penalty") = 1.0, py::arg("terminal_bonus_s") = 2.0);

  m.def(
      "cosine_similarity",
      [](std::vector<double> a, std::vector<double> b) {
        return speaker::cosine_similarity(speaker::SpeakerEmbedding(std::move(a)),
                                          speaker::SpeakerEmbedding(std::move(b)));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "calibrate_threshold_eer",
      [](const std::vector<double>& genuine, const std::vector<double>& impostor) {
        const auto r = speaker::calibrate_threshold_eer(genuine, impostor);
        return py::make_tuple(r.threshold, r.eer);
      },
      py::arg("genuine"), py::arg("impostor"), "Returns (threshold, eer).");

  m.def(
      "compute_stats",
      [](const std::filesystem::path& manifest, const std::string& split) {
        return stats_list(pipeline::compute_stats(pipeline::load_manifest(manifest), split));
      },
      py::arg("manifest"), py::arg("split") = "");
  m.def(
      "format_stats",
      [](const std::filesystem::path& manifest, const std::string& split) {
        std::string out;
        for (const auto& t : pipeline::compute_stats(pipeline::load_manifest(manifest), split)) {
          out += pipeline::format_stats(t);
        }
        return out;
      },
      py::arg("manifest"), py::arg("split") = "");

  m.def(
      "clean_pages",
      [](const std::vector<std::pair<std::string, std::vector<std::string>>>& pages,
         const std::vector<std::string>& blacklist, const std::string& lang) {
        text::CleanConfig cfg;
        for (const auto& b : blacklist) cfg.blacklist.insert(utf8::to_lower(b));
        cfg.lang = lang;
        const auto classifier = text::NgramLanguageClassifier::with_default_profiles();
        text::MemoryDedupStore store;
        text::CleanReport report;
        py::list kept;
        for (const auto& [url, lines] : pages) {
          if (auto out = text::clean_page({url, lines}, cfg, classifier, store, report)) {
            kept.append(py::make_tuple(out->url, out->lines));
          }
        }
        return py::make_tuple(kept, report_dict(report));
      },
      py::arg("pages"), py::arg("blacklist") = std::vector<std::string>{},
      py::arg("lang") = "cs",
      "Cleans (url, lines) pages in order; returns (kept pages, report).");
}

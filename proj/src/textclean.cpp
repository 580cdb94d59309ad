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

#include "corpusforge/textclean.hpp"

#include <sodium.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "corpusforge/utf8.hpp"

namespace corpusforge::text {
namespace {

// Maximal runs of letters/digits, lowercased.
std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char32_t cp : utf8::decode_lossy(text)) {
    if (utf8::is_alnum(cp)) {
      utf8::append(cur, utf8::to_lower(cp));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

bool ends_with_terminal(std::string_view line, const CleanConfig& cfg) {
  const auto cps = utf8::decode_lossy(line);
  for (auto it = cps.rbegin(); it != cps.rend(); ++it) {
    if (utf8::is_space(*it)) continue;
    return cfg.terminal_marks.find(*it) != std::u32string::npos;
  }
  return false;
}

bool contains_any(std::string_view lowered, const std::vector<std::string>& needles) {
  return std::any_of(needles.begin(), needles.end(), [&](const std::string& n) {
    return lowered.find(utf8::to_lower(n)) != std::string_view::npos;
  });
}

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out.push_back('\n');
    out += l;
  }
  return out;
}

}  // namespace

void CleanConfig::validate() const {
  if (!(lang_prob_min > 0.0 && lang_prob_min <= 1.0)) {
    throw TextError(TextErrc::InvalidConfig, "lang_prob_min must be in (0, 1]");
  }
  if (min_words_per_line < 1 || min_sentences_per_page < 1) {
    throw TextError(TextErrc::InvalidConfig, "minimum counts must be >= 1");
  }
  if (terminal_marks.empty()) {
    throw TextError(TextErrc::InvalidConfig, "terminal_marks is empty");
  }
}

std::set<std::string> load_blacklist(std::istream& in) {
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto entry = utf8::collapse_whitespace(utf8::to_lower(line));
    if (!entry.empty()) out.insert(std::move(entry));
  }
  return out;
}

Fingerprint fingerprint_line(std::string_view line) {
  static const bool ready = sodium_init() >= 0;
  (void)ready;
  const std::string norm = utf8::collapse_whitespace(utf8::to_lower(line));
  Fingerprint fp;
  crypto_generichash(fp.bytes.data(), fp.bytes.size(),
                     reinterpret_cast<const unsigned char*>(norm.data()), norm.size(),
                     nullptr, 0);
  return fp;
}

std::size_t MemoryDedupStore::Hash::operator()(const Fingerprint& fp) const noexcept {
  std::size_t h;
  std::memcpy(&h, fp.bytes.data(), sizeof(h));
  return h;
}

bool MemoryDedupStore::insert_if_absent(const Fingerprint& fp) {
  auto& shard = shards_[fp.bytes[15] % kShards];
  std::lock_guard lock(shard.mu);
  return shard.set.insert(fp).second;
}

std::size_t MemoryDedupStore::size() const {
  std::size_t n = 0;
  for (const auto& s : shards_) {
    std::lock_guard lock(s.mu);
    n += s.set.size();
  }
  return n;
}

void MemoryDedupStore::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TextError(TextErrc::StoreUnavailable, "cannot open " + path.string());
  Fingerprint fp;
  while (in.read(reinterpret_cast<char*>(fp.bytes.data()), fp.bytes.size())) {
    insert_if_absent(fp);
  }
  if (in.gcount() != 0) {
    throw TextError(TextErrc::StoreUnavailable, "truncated store file " + path.string());
  }
}

void MemoryDedupStore::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TextError(TextErrc::StoreUnavailable, "cannot write " + path.string());
  for (const auto& s : shards_) {
    std::lock_guard lock(s.mu);
    for (const auto& fp : s.set) {
      out.write(reinterpret_cast<const char*>(fp.bytes.data()), fp.bytes.size());
    }
  }
  if (!out) throw TextError(TextErrc::StoreUnavailable, "write failed " + path.string());
}

void CleanReport::merge(const CleanReport& other) {
  pages_examined += other.pages_examined;
  pages_retained += other.pages_retained;
  lines_examined += other.lines_examined;
  lines_retained += other.lines_retained;
  for (int r = 0; r < kRuleCount; ++r) {
    lines_removed[r] += other.lines_removed[r];
    pages_removed[r] += other.pages_removed[r];
  }
}

std::uint64_t CleanReport::total_lines_removed() const {
  std::uint64_t n = 0;
  for (auto v : lines_removed) n += v;
  return n;
}

std::uint64_t CleanReport::total_pages_removed() const {
  std::uint64_t n = 0;
  for (auto v : pages_removed) n += v;
  return n;
}

std::string CleanReport::to_text() const {
  std::ostringstream os;
  os << "pages_examined = " << pages_examined << '\n'
     << "pages_retained = " << pages_retained << '\n'
     << "lines_examined = " << lines_examined << '\n'
     << "lines_retained = " << lines_retained << '\n';
  for (int r = 0; r < kRuleCount; ++r) {
    os << "rule" << r + 1 << ".lines_removed = " << lines_removed[r] << '\n';
  }
  for (int r = 0; r < kRuleCount; ++r) {
    os << "rule" << r + 1 << ".pages_removed = " << pages_removed[r] << '\n';
  }
  return os.str();
}

std::string CleanReport::to_rows() const {
  std::ostringstream os;
  for (int r = 0; r < kRuleCount; ++r) {
    os << R"({"rule":)" << r + 1 << R"(,"scope":"line","removed_count":)"
       << lines_removed[r] << "}\n";
  }
  for (int r : {3, 4, 5, 7}) {
    os << R"({"rule":)" << r << R"(,"scope":"page","removed_count":)"
       << pages_removed[r - 1] << "}\n";
  }
  return os.str();
}

WebPage apply_line_rules(const WebPage& page, const CleanConfig& cfg, CleanReport* report) {
  WebPage out{page.url, {}};
  for (const auto& line : page.lines) {
    if (!ends_with_terminal(line, cfg)) {
      if (report) ++report->lines_removed[0];
      continue;
    }
    if (contains_any(utf8::to_lower(line), cfg.forbidden_substrings)) {
      if (report) ++report->lines_removed[1];
      continue;
    }
    out.lines.push_back(line);
  }
  return out;
}

int page_rule_verdict(const WebPage& page, const CleanConfig& cfg,
                      const LanguageClassifier& classifier) {
  const std::string text = join_lines(page.lines);

  if (!cfg.blacklist.empty()) {
    const auto words = word_tokens(text);
    for (const auto& entry : cfg.blacklist) {
      const auto needle = word_tokens(entry);
      if (needle.empty()) continue;
      if (std::search(words.begin(), words.end(), needle.begin(), needle.end()) !=
          words.end()) {
        return 3;
      }
    }
  }

  if (contains_any(utf8::to_lower(text), cfg.placeholder_substrings)) return 4;

  double p = 0.0;
  try {
    p = classifier.probability(text, cfg.lang);
  } catch (const std::exception& e) {
    throw TextError(TextErrc::ClassifierFailure, page.url + ": " + e.what());
  }
  if (p < cfg.lang_prob_min) return 5;
  return 0;
}

std::optional<WebPage> apply_page_rules(const WebPage& page, const CleanConfig& cfg,
                                        const LanguageClassifier& classifier) {
  if (page_rule_verdict(page, cfg, classifier) != 0) return std::nullopt;
  return page;
}

bool dedup_line(std::string_view line, DedupStore& store) {
  return store.insert_if_absent(fingerprint_line(line));
}

std::size_t count_sentences(const std::vector<std::string>& lines, const CleanConfig& cfg) {
  std::size_t n = 0;
  for (const auto& line : lines) {
    for (char32_t cp : utf8::decode_lossy(line)) {
      if (cfg.terminal_marks.find(cp) != std::u32string::npos) ++n;
    }
  }
  return n;
}

std::optional<WebPage> clean_page(const WebPage& page, const CleanConfig& cfg,
                                  const LanguageClassifier& classifier,
                                  DedupStore& store, CleanReport& delta) {
  ++delta.pages_examined;
  delta.lines_examined += page.lines.size();

  WebPage kept = apply_line_rules(page, cfg, &delta);

  if (const int rule = page_rule_verdict(kept, cfg, classifier); rule != 0) {
    ++delta.pages_removed[rule - 1];
    delta.lines_removed[rule - 1] += kept.lines.size();
    return std::nullopt;
  }

  std::vector<std::string> unique;
  for (auto& line : kept.lines) {
    if (dedup_line(line, store)) {
      unique.push_back(std::move(line));
    } else {
      ++delta.lines_removed[5];
    }
  }

  std::vector<std::string> long_enough;
  for (auto& line : unique) {
    if (utf8::split_words(line).size() >= static_cast<std::size_t>(cfg.min_words_per_line)) {
      long_enough.push_back(std::move(line));
    } else {
      ++delta.lines_removed[6];
    }
  }
  if (count_sentences(long_enough, cfg) <
      static_cast<std::size_t>(cfg.min_sentences_per_page)) {
    ++delta.pages_removed[6];
    delta.lines_removed[6] += long_enough.size();
    return std::nullopt;
  }

  WebPage out{page.url, {}};
  out.lines.reserve(long_enough.size());
  for (const auto& line : long_enough) out.lines.push_back(utf8::to_lower(line));
  ++delta.pages_retained;
  delta.lines_retained += out.lines.size();
  return out;
}

void write_clean_pages(std::ostream& out, const std::vector<WebPage>& pages) {
  for (const auto& p : pages) {
    for (const auto& l : p.lines) out << l << '\n';
    out << '\n';
  }
}

std::vector<WebPage> read_clean_pages(std::istream& in) {
  std::vector<WebPage> pages;
  WebPage cur;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      if (!cur.lines.empty()) pages.push_back(std::move(cur));
      cur = WebPage{};
    } else {
      cur.lines.push_back(line);
    }
  }
  if (!cur.lines.empty()) pages.push_back(std::move(cur));
  return pages;
}

}  // namespace corpusforge::text

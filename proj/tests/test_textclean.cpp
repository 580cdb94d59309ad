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

#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "corpusforge/langid.hpp"
#include "corpusforge/utf8.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corpusforge;
using namespace corpusforge::text;
using corpusforge::wet::WebPage;

namespace {

const FixedLanguageClassifier kCzech("cs", 1.0);

WebPage numbered_page(int n, const std::string& url = "http://x/") {
  WebPage p{url, {}};
  for (int i = 0; i < n; ++i) p.lines.push_back("Slovo slovo slovo " + std::to_string(i) + ".");
  return p;
}

class ThrowingClassifier final : public LanguageClassifier {
 public:
  std::vector<LanguageGuess> classify(std::string_view) const override {
    throw std::runtime_error("model crashed");
  }
};

}  // namespace

TEST_CASE("line rules keep terminated lines without forbidden words") {
  CleanConfig cfg;
  WebPage page{"u", {"Toto je věta.", "Tato stránka používá cookies.", "věta bez tečky",
                     "Zapněte JavaScript!", "Opravdu?  "}};
  CleanReport report;
  const auto out = apply_line_rules(page, cfg, &report);
  CHECK(out.lines == std::vector<std::string>{"Toto je věta.", "Opravdu?  "});
  CHECK(report.lines_removed[0] == 1);
  CHECK(report.lines_removed[1] == 2);
}

TEST_CASE("page rules") {
  CleanConfig cfg;
  SUBCASE("placeholder anywhere drops the page") {
    WebPage page{"u", {"Úvodní věta.", "Lorem ipsum dolor sit amet."}};
    CHECK_FALSE(apply_page_rules(page, cfg, kCzech));
    WebPage brace{"u", {"Funkce { vrací nulu."}};
    CHECK(page_rule_verdict(brace, cfg, kCzech) == 4);
  }
  SUBCASE("language probability threshold is inclusive") {
    WebPage page{"u", {"Dobrý den."}};
    CHECK(apply_page_rules(page, cfg, FixedLanguageClassifier("cs", 0.99)));
    CHECK_FALSE(apply_page_rules(page, cfg, FixedLanguageClassifier("cs", 0.989)));
    CHECK(page_rule_verdict(page, cfg, FixedLanguageClassifier("sk", 1.0)) == 5);
  }
  SUBCASE("identity when nothing fires") {
    WebPage page{"u", {"Jedna věta.", "Druhá věta."}};
    const auto out = apply_page_rules(page, cfg, kCzech);
    REQUIRE(out);
    CHECK(*out == page);
  }
  SUBCASE("blacklist matches whole words regardless of case") {
    cfg.blacklist = {"hrom", "do háje"};
    CHECK(page_rule_verdict({"u", {"Zahřmělo, HROM bije."}}, cfg, kCzech) == 3);
    CHECK(page_rule_verdict({"u", {"Hromada písku."}}, cfg, kCzech) == 0);
    CHECK(page_rule_verdict({"u", {"Jdi do", "háje."}}, cfg, kCzech) == 3);
  }
  SUBCASE("classifier failures name the page") {
    try {
      page_rule_verdict({"http://bad/", {"Věta."}}, cfg, ThrowingClassifier());
      FAIL("expected ClassifierFailure");
    } catch (const TextError& e) {
      CHECK(e.kind() == TextErrc::ClassifierFailure);
      CHECK(std::string(e.what()).find("http://bad/") != std::string::npos);
    }
  }
}

TEST_CASE("blacklist file loading") {
  std::istringstream in("Hrom\n\n  do   háje \n");
  const auto bl = load_blacklist(in);
  CHECK(bl == std::set<std::string>{"hrom", "do háje"});
}

TEST_CASE("dedup keeps the first occurrence only") {
  MemoryDedupStore store;
  CHECK(dedup_line("Stejný řádek.", store));
  CHECK_FALSE(dedup_line("Stejný řádek.", store));
  CHECK_FALSE(dedup_line("  Stejný   řádek. ", store));
  CHECK_FALSE(dedup_line("STEJNÝ ŘÁDEK.", store));
  CHECK(dedup_line("Stejný řádek!", store));
  CHECK(store.size() == 2);
}

TEST_CASE("dedup across pages") {
  CleanConfig cfg;
  MemoryDedupStore store;
  CleanReport report;
  auto a = numbered_page(5, "A");
  auto b = numbered_page(5, "B");
  b.lines.push_back("Nový řádek s textem.");
  b.lines[0] = a.lines[0];
  const auto ca = clean_page(a, cfg, kCzech, store, report);
  REQUIRE(ca);
  CHECK(ca->lines.size() == 5);
  // b shares all five lines with a, so only the new line survives and the
  // page falls short of five sentences.
  CHECK_FALSE(clean_page(b, cfg, kCzech, store, report));
  CHECK(report.lines_removed[5] == 5);
  CHECK(report.pages_removed[6] == 1);
}

TEST_CASE("fingerprints") {
  CHECK(fingerprint_line("a  b") == fingerprint_line("a b"));
  CHECK_FALSE(fingerprint_line("a b.") == fingerprint_line("a c."));
}

TEST_CASE("dedup store persistence") {
  cftest::TempDir dir;
  MemoryDedupStore store;
  store.insert_if_absent(fingerprint_line("jedna"));
  store.insert_if_absent(fingerprint_line("dvě"));
  store.save(dir / "store.bin");
  MemoryDedupStore back;
  back.load(dir / "store.bin");
  CHECK(back.size() == 2);
  CHECK_FALSE(back.insert_if_absent(fingerprint_line("jedna")));
  CHECK(back.insert_if_absent(fingerprint_line("tři")));
}

TEST_CASE("concurrent insert reports new exactly once") {
  MemoryDedupStore store;
  std::atomic<int> fresh{0};
  {
    std::vector<std::jthread> threads;
    for (int t = 0; t < 8; ++t) {
      threads.emplace_back([&] {
        for (int i = 0; i < 2000; ++i) {
          if (store.insert_if_absent(fingerprint_line("line " + std::to_string(i)))) ++fresh;
        }
      });
    }
  }
  CHECK(fresh == 2000);
  CHECK(store.size() == 2000);
}

TEST_CASE("rule seven") {
  CleanConfig cfg;
  MemoryDedupStore store;
  CleanReport report;
  SUBCASE("five sentences keep the page") {
    const auto out = clean_page(numbered_page(5), cfg, kCzech, store, report);
    REQUIRE(out);
    CHECK(count_sentences(out->lines, cfg) == 5);
    CHECK(out->lines[0] == "slovo slovo slovo 0.");
  }
  SUBCASE("four sentences drop it") {
    CHECK_FALSE(clean_page(numbered_page(4), cfg, kCzech, store, report));
    CHECK(report.pages_removed[6] == 1);
    CHECK(report.lines_removed[6] == 4);
  }
  SUBCASE("two-word lines go") {
    auto page = numbered_page(5);
    page.lines.insert(page.lines.begin() + 2, "Dvě slova.");
    const auto out = clean_page(page, cfg, kCzech, store, report);
    REQUIRE(out);
    CHECK(out->lines.size() == 5);
    CHECK(report.lines_removed[6] == 1);
  }
}

TEST_CASE("page rules run before dedup") {
  // A line on a page rejected by rule 4 must not claim its fingerprint.
  CleanConfig cfg;
  MemoryDedupStore store;
  CleanReport report;
  auto rejected = numbered_page(5, "A");
  rejected.lines.push_back("Lorem ipsum dolor sit amet.");
  CHECK_FALSE(clean_page(rejected, cfg, kCzech, store, report));
  const auto kept = clean_page(numbered_page(5, "B"), cfg, kCzech, store, report);
  REQUIRE(kept);
  CHECK(kept->lines.size() == 5);
  CHECK(report.pages_removed[3] == 1);
  CHECK(report.lines_removed[3] == 6);
}

TEST_CASE("line rules run before dedup") {
  // "Sdílený řádek" appears without a terminal mark first; it must not be
  // treated as seen when it later appears terminated.
  CleanConfig cfg;
  MemoryDedupStore store;
  CleanReport report;
  auto first = numbered_page(5, "A");
  first.lines.push_back("Sdílený řádek s textem");
  REQUIRE(clean_page(first, cfg, kCzech, store, report));
  auto second = numbered_page(0, "B");
  second.lines = {"Sdílený řádek s textem.", "Jiná věta číslo jedna.", "Jiná věta číslo dvě.",
                  "Jiná věta číslo tři.", "Jiná věta číslo čtyři."};
  const auto out = clean_page(second, cfg, kCzech, store, report);
  REQUIRE(out);
  CHECK(out->lines.front() == "sdílený řádek s textem.");
}

TEST_CASE("random pages: counters balance and output obeys the rules") {
  std::mt19937 rng(11);
  const std::vector<std::string> words = {"Ahoj", "světe", "pes", "kočka", "LOREM", "ipsum",
                                          "cookies", "dům", "Řeka", "{", "strom", "les"};
  const std::vector<std::string> ends = {".", "?", "!", "", ",", " ."};
  std::uniform_int_distribution<std::size_t> wpick(0, words.size() - 1);
  std::uniform_int_distribution<std::size_t> epick(0, ends.size() - 1);
  std::uniform_int_distribution<int> nwords(1, 6), nlines(0, 12);
  CleanConfig cfg;
  MemoryDedupStore store;
  CleanReport total;
  for (int p = 0; p < 400; ++p) {
    WebPage page{"u" + std::to_string(p), {}};
    const int n = nlines(rng);
    for (int i = 0; i < n; ++i) {
      std::string line;
      const int k = nwords(rng);
      for (int j = 0; j < k; ++j) line += (j ? " " : "") + words[wpick(rng)];
      page.lines.push_back(line + ends[epick(rng)]);
    }
    CleanReport delta;
    const auto out = clean_page(page, cfg, kCzech, store, delta);
    CHECK(delta.pages_examined == 1);
    CHECK(delta.pages_retained + delta.total_pages_removed() == 1);
    CHECK(delta.lines_retained + delta.total_lines_removed() == page.lines.size());
    if (out) {
      for (const auto& line : out->lines) {
        CHECK(utf8::to_lower(line) == line);
        CHECK(utf8::split_words(line).size() >= 3);
        const char last = line.find_last_not_of(' ') != std::string::npos
                              ? line[line.find_last_not_of(' ')]
                              : ' ';
        CHECK((last == '.' || last == '?' || last == '!'));
      }
    }
    total.merge(delta);
  }
  CHECK(total.pages_examined == 400);
  CHECK(total.pages_retained + total.total_pages_removed() == total.pages_examined);
  CHECK(total.lines_retained + total.total_lines_removed() == total.lines_examined);
}

TEST_CASE("report formats") {
  CleanReport r;
  r.pages_examined = 3;
  r.pages_retained = 1;
  r.pages_removed[4] = 2;
  r.lines_removed[0] = 7;
  const auto text = r.to_text();
  CHECK(text.find("pages_examined = 3\n") != std::string::npos);
  CHECK(text.find("rule5.pages_removed = 2\n") != std::string::npos);
  const auto rows = r.to_rows();
  CHECK(rows.find(R"({"rule":1,"scope":"line","removed_count":7})") != std::string::npos);
  CHECK(rows.find(R"({"rule":5,"scope":"page","removed_count":2})") != std::string::npos);
}

TEST_CASE("cleaned text format round trip") {
  std::vector<WebPage> pages = {{"", {"první řádek.", "druhý řádek."}}, {"", {"třetí."}}};
  std::ostringstream out;
  write_clean_pages(out, pages);
  CHECK(out.str() == "první řádek.\ndruhý řádek.\n\ntřetí.\n\n");
  std::istringstream in(out.str());
  CHECK(read_clean_pages(in) == pages);
}

TEST_CASE("config validation") {
  CleanConfig cfg;
  cfg.lang_prob_min = 0.0;
  CHECK_THROWS_AS(cfg.validate(), TextError);
  cfg = {};
  cfg.min_words_per_line = 0;
  CHECK_THROWS_AS(cfg.validate(), TextError);
}

TEST_CASE("n-gram classifier") {
  const auto clf = NgramLanguageClassifier::with_default_profiles();
  const std::string czech =
      "Včera jsme byli s dětmi na výletě v horách a počasí nám opravdu přálo.\n"
      "Cestou zpátky jsme se zastavili v malé hospodě, kde vařili výborný oběd.\n"
      "Večer jsme si doma povídali o tom, kam pojedeme příští víkend.";
  const std::string english =
      "Yesterday we went hiking in the mountains with the children and the weather was lovely.\n"
      "On the way back we stopped at a small pub that served an excellent lunch.";
  const std::string slovak =
      "Včera sme boli s deťmi na výlete v horách a počasie nám naozaj prialo.\n"
      "Cestou späť sme sa zastavili v malej krčme, kde varili výborný obed.";
  CHECK(clf.probability(czech, "cs") >= 0.99);
  CHECK(clf.probability(utf8::to_lower(czech), "cs") >= 0.99);
  CHECK(clf.probability(english, "cs") < 0.99);
  CHECK(clf.classify(english).front().lang == "en");
  CHECK(clf.classify(slovak).front().lang == "sk");
  double sum = 0.0;
  for (const auto& g : clf.classify(czech)) sum += g.probability;
  CHECK(sum == doctest::Approx(1.0));
  CHECK_THROWS_AS(clf.log_likelihood(czech, "xx"), std::out_of_range);
  CHECK(clf.log_likelihood(czech, "cs") > clf.log_likelihood(czech, "sk"));
  CHECK(clf.probability("", "cs") < 0.99);
}

TEST_CASE("character n-grams") {
  const auto g = char_ngrams("Ab, ab!", 3);
  CHECK(g.at(U"a") == 2);
  CHECK(g.at(U" ab") == 2);
  CHECK(g.at(U"ab ") == 2);
  CHECK(g.at(U" a") == 2);
  CHECK(g.count(U" ") == 0);
  CHECK(g.count(U"b a") == 0);
  CHECK(char_ngrams("123 ...", 3).empty());
}

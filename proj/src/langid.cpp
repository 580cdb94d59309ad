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

#include "corpusforge/langid.hpp"

#include <algorithm>
#include <cmath>

#include "corpusforge/utf8.hpp"

namespace corpusforge::text {
namespace {

constexpr std::string_view kCzech =
    "Praha je hlavní a současně největší město České republiky. Leží na řece "
    "Vltavě a žije v ní přibližně jeden a čtvrt milionu obyvatel. Historické "
    "centrum města je zapsáno na seznamu světového dědictví. Většina lidí "
    "jezdí do práce tramvají nebo metrem, protože doprava ve městě je rychlá "
    "a poměrně levná. V létě se na nábřeží pořádají koncerty a trhy, kde si "
    "můžete koupit čerstvou zeleninu, ovoce a domácí sýry. Naše škola se "
    "nachází v klidné čtvrti nedaleko parku. Děti se učí číst, psát a počítat "
    "a odpoledne chodí na kroužky. Počasí bylo včera velmi příjemné, ale dnes "
    "ráno začalo pršet a teplota klesla. Vláda schválila nový zákon o "
    "ochraně přírody, který má zlepšit kvalitu ovzduší i vody. Podle "
    "odborníků bude potřeba ještě několik let, než se projeví první výsledky. "
    "Rádi bychom vás pozvali na setkání, které se uskuteční příští čtvrtek "
    "večer v místní knihovně. Kniha vypráví příběh mladé ženy, která odjela "
    "do ciziny a po letech se vrátila domů. Zaměstnanci firmy dostali na konci "
    "roku odměny a vedení slíbilo, že mzdy porostou. Čeština patří mezi "
    "západoslovanské jazyky a používá háčky a čárky nad písmeny.";

constexpr std::string_view kSlovak =
    "Bratislava je hlavné a zároveň najväčšie mesto Slovenskej republiky. "
    "Leží na rieke Dunaj a žije v nej približne štyristo tisíc obyvateľov. "
    "Historické centrum mesta láka mnoho turistov. Väčšina ľudí chodí do "
    "práce autobusom alebo električkou, pretože doprava v meste je pomerne "
    "lacná. V lete sa na nábreží konajú koncerty a trhy, kde si môžete kúpiť "
    "čerstvú zeleninu, ovocie a domáce syry. Naša škola sa nachádza v tichej "
    "štvrti neďaleko parku. Deti sa učia čítať, písať a počítať a popoludní "
    "chodia na krúžky. Počasie bolo včera veľmi príjemné, ale dnes ráno "
    "začalo pršať a teplota klesla. Vláda schválila nový zákon o ochrane "
    "prírody, ktorý má zlepšiť kvalitu ovzdušia aj vody. Podľa odborníkov "
    "bude potrebných ešte niekoľko rokov, kým sa prejavia prvé výsledky. Radi "
    "by sme vás pozvali na stretnutie, ktoré sa uskutoční budúci štvrtok "
    "večer v miestnej knižnici. Slovenčina patrí medzi západoslovanské jazyky "
    "a používa mäkčene, dĺžne a vokáň nad písmenami.";

constexpr std::string_view kPolish =
    "Warszawa jest stolicą i największym miastem Polski. Leży nad Wisłą i "
    "mieszka w niej prawie dwa miliony ludzi. Stare miasto zostało "
    "odbudowane po wojnie i jest wpisane na listę światowego dziedzictwa. "
    "Większość mieszkańców dojeżdża do pracy tramwajem albo metrem, "
    "ponieważ komunikacja miejska jest szybka i dość tania. Latem nad rzeką "
    "odbywają się koncerty i targi, na których można kupić świeże warzywa, "
    "owoce i domowe sery. Nasza szkoła znajduje się w spokojnej dzielnicy "
    "niedaleko parku. Dzieci uczą się czytać, pisać i liczyć, a po południu "
    "chodzą na zajęcia dodatkowe. Wczoraj pogoda była bardzo przyjemna, ale "
    "dzisiaj rano zaczęło padać i temperatura spadła. Rząd przyjął nową "
    "ustawę o ochronie przyrody, która ma poprawić jakość powietrza i wody. "
    "Według ekspertów potrzeba jeszcze kilku lat, zanim pojawią się pierwsze "
    "efekty. Chcielibyśmy zaprosić państwa na spotkanie, które odbędzie się w "
    "przyszły czwartek wieczorem w bibliotece.";

constexpr std::string_view kEnglish =
    "London is the capital and largest city of England and the United "
    "Kingdom. It stands on the River Thames and has a population of about "
    "nine million people. The historic centre of the city attracts millions "
    "of visitors every year. Most people travel to work by bus or by the "
    "underground, because public transport in the city is fast and fairly "
    "reliable. In the summer there are concerts and markets along the river, "
    "where you can buy fresh vegetables, fruit and local cheese. Our school "
    "is located in a quiet neighbourhood near the park. The children learn to "
    "read, write and count, and in the afternoon they join clubs and sports. "
    "The weather was very pleasant yesterday, but this morning it started to "
    "rain and the temperature dropped. The government approved a new law on "
    "the protection of nature that should improve the quality of air and "
    "water. According to experts it will take several more years before the "
    "first results appear. We would like to invite you to a meeting that "
    "will take place next Thursday evening in the local library.";

constexpr std::string_view kGerman =
    "Berlin ist die Hauptstadt und zugleich die größte Stadt Deutschlands. "
    "Die Stadt liegt an der Spree und hat ungefähr dreieinhalb Millionen "
    "Einwohner. Das historische Zentrum der Stadt zieht jedes Jahr viele "
    "Besucher an. Die meisten Menschen fahren mit der Straßenbahn oder mit "
    "der U-Bahn zur Arbeit, weil der öffentliche Verkehr schnell und "
    "ziemlich günstig ist. Im Sommer gibt es am Ufer Konzerte und Märkte, wo "
    "man frisches Gemüse, Obst und Käse kaufen kann. Unsere Schule befindet "
    "sich in einem ruhigen Viertel in der Nähe des Parks. Die Kinder lernen "
    "lesen, schreiben und rechnen, und am Nachmittag besuchen sie "
    "verschiedene Kurse. Gestern war das Wetter sehr angenehm, aber heute "
    "Morgen begann es zu regnen und die Temperatur sank. Die Regierung hat "
    "ein neues Gesetz zum Schutz der Natur beschlossen, das die Qualität von "
    "Luft und Wasser verbessern soll. Nach Meinung der Experten wird es noch "
    "einige Jahre dauern, bis sich die ersten Ergebnisse zeigen.";

}  // namespace

double LanguageClassifier::probability(std::string_view text, std::string_view lang) const {
  for (const auto& g : classify(text)) {
    if (g.lang == lang) return g.probability;
  }
  return 0.0;
}

std::map<std::u32string, std::size_t> char_ngrams(std::string_view text, int max_order) {
  std::u32string norm = U" ";
  for (char32_t cp : utf8::decode_lossy(text)) {
    const bool letter = utf8::is_alnum(cp) && !(cp >= U'0' && cp <= U'9');
    if (letter) {
      norm.push_back(utf8::to_lower(cp));
    } else if (norm.back() != U' ') {
      norm.push_back(U' ');
    }
  }
  if (norm.back() != U' ') norm.push_back(U' ');

  std::map<std::u32string, std::size_t> counts;
  for (std::size_t i = 0; i < norm.size(); ++i) {
    for (int n = 1; n <= max_order && i + static_cast<std::size_t>(n) <= norm.size(); ++n) {
      std::u32string g = norm.substr(i, static_cast<std::size_t>(n));
      // Spaces only at the edges: "a", " ab", "ab ", never "a b" or " ".
      if (n == 1 && g[0] == U' ') continue;
      if (n == 3 && g[1] == U' ') continue;
      ++counts[std::move(g)];
    }
  }
  return counts;
}

NgramLanguageClassifier::NgramLanguageClassifier(double alpha) : alpha_(alpha) {}

void NgramLanguageClassifier::add_profile(const std::string& lang, std::string_view training_text) {
  Model m;
  for (auto& [g, n] : char_ngrams(training_text, kMaxOrder)) {
    m.totals[g.size()] += static_cast<double>(n);
    m.counts.emplace(g, static_cast<double>(n));
  }
  models_[lang] = std::move(m);
}

NgramLanguageClassifier NgramLanguageClassifier::with_default_profiles() {
  NgramLanguageClassifier c;
  c.add_profile("cs", kCzech);
  c.add_profile("sk", kSlovak);
  c.add_profile("pl", kPolish);
  c.add_profile("en", kEnglish);
  c.add_profile("de", kGerman);
  return c;
}

double NgramLanguageClassifier::log_likelihood(std::string_view text,
                                               const std::string& lang) const {
  const Model& m = models_.at(lang);
  double ll = 0.0;
  for (const auto& [g, n] : char_ngrams(text, kMaxOrder)) {
    const auto it = m.counts.find(g);
    const double c = it == m.counts.end() ? 0.0 : it->second;
    ll += static_cast<double>(n) *
          std::log((c + alpha_) / (m.totals[g.size()] + alpha_ * kBuckets));
  }
  return ll;
}

std::vector<LanguageGuess> NgramLanguageClassifier::classify(std::string_view text) const {
  std::vector<LanguageGuess> out;
  if (models_.empty()) return out;
  std::vector<double> ll;
  for (const auto& [lang, _] : models_) ll.push_back(log_likelihood(text, lang));
  const double best = *std::max_element(ll.begin(), ll.end());
  double z = 0.0;
  std::size_t i = 0;
  for (const auto& [lang, _] : models_) {
    const double w = std::exp(ll[i++] - best);
    out.push_back({lang, w});
    z += w;
  }
  for (auto& g : out) g.probability /= z;
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.probability > b.probability;
  });
  return out;
}

std::vector<std::string> NgramLanguageClassifier::languages() const {
  std::vector<std::string> out;
  for (const auto& [lang, _] : models_) out.push_back(lang);
  return out;
}

}  // namespace corpusforge::text

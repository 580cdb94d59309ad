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
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace corpusforge::text {

struct LanguageGuess {
  std::string lang;
  double probability = 0.0;
};

/// Pluggable language identification. Implementations may throw; the
/// cleaning pipeline wraps failures with the page URL.
class LanguageClassifier {
 public:
  virtual ~LanguageClassifier() = default;

  /// Guesses sorted by descending probability; probabilities sum to <= 1.
  virtual std::vector<LanguageGuess> classify(std::string_view text) const = 0;

  /// Probability assigned to `lang`, 0 when it is not among the guesses.
  double probability(std::string_view text, std::string_view lang) const;
};

/// Multinomial naive Bayes over character n-grams (orders 1 to 3) with
/// add-alpha smoothing and a uniform prior. Text is lowercased and
/// non-letters act as word boundaries.
class NgramLanguageClassifier final : public LanguageClassifier {
 public:
  static constexpr int kMaxOrder = 3;
  static constexpr double kBuckets = 65536.0;  // assumed vocabulary size per order

  explicit NgramLanguageClassifier(double alpha = 0.5);

  /// Builds (or replaces) the model for `lang` from sample text.
  void add_profile(const std::string& lang, std::string_view training_text);

  /// Models for cs, sk, pl, en and de built from bundled sample text.
  static NgramLanguageClassifier with_default_profiles();

  /// Posterior over the known languages. Text without letters gets the
  /// uniform distribution.
  std::vector<LanguageGuess> classify(std::string_view text) const override;

  /// Log-likelihood of the text's n-grams under one model. Throws
  /// std::out_of_range for an unknown language.
  double log_likelihood(std::string_view text, const std::string& lang) const;

  std::vector<std::string> languages() const;

 private:
  struct Model {
    std::map<std::u32string, double> counts;
    std::array<double, kMaxOrder + 1> totals{};
  };
  double alpha_;
  std::map<std::string, Model> models_;
};

/// N-grams of orders 1..max_order with their counts. Bigrams and trigrams
/// may touch a word boundary but never span one.
std::map<std::u32string, std::size_t> char_ngrams(std::string_view text, int max_order);

/// Always answers with a fixed language and probability. Handy for tests and
/// for pipelines that pre-filter language upstream.
class FixedLanguageClassifier final : public LanguageClassifier {
 public:
  FixedLanguageClassifier(std::string lang, double probability)
      : guess_{std::move(lang), probability} {}
  std::vector<LanguageGuess> classify(std::string_view) const override { return {guess_}; }

 private:
  LanguageGuess guess_;
};

}  // namespace corpusforge::text

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

#include <string>
#include <vector>

namespace corpusforge {

/// One recognized word with its time span. `terminal_after` is set when
/// restored punctuation put ".", "?" or "!" right after this word.
struct WordAlignment {
  std::string word;
  double start_s = 0.0;
  double end_s = 0.0;
  double confidence = 1.0;
  bool terminal_after = false;

  bool operator==(const WordAlignment&) const = default;
};

using WordList = std::vector<WordAlignment>;

}  // namespace corpusforge

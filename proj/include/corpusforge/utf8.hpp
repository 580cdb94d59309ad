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
#include <string_view>
#include <vector>

// UTF-8 helpers shared by the text and transcript modules. Character classes
// and case mapping follow the C.UTF-8 locale tables (Unicode simple mapping).
namespace corpusforge::utf8 {

inline constexpr char32_t kReplacement = 0xFFFD;

/// Decodes `bytes`, replacing every invalid or truncated sequence with U+FFFD.
std::u32string decode_lossy(std::string_view bytes);

/// Re-encodes `bytes` as valid UTF-8 (invalid sequences become U+FFFD).
std::string sanitize(std::string_view bytes);

std::string encode(std::u32string_view text);
void append(std::string& out, char32_t cp);

char32_t to_lower(char32_t cp);
bool is_space(char32_t cp);
bool is_punct(char32_t cp);
bool is_alnum(char32_t cp);

std::string to_lower(std::string_view text);

/// Splits on Unicode whitespace, dropping empty tokens.
std::vector<std::string> split_words(std::string_view text);

/// split_words(text).size() without building the words.
std::size_t count_words(std::string_view text);

/// Trims and collapses each whitespace run to a single ASCII space.
std::string collapse_whitespace(std::string_view text);

/// Number of code points after lossy decoding.
std::size_t length(std::string_view text);

}  // namespace corpusforge::utf8

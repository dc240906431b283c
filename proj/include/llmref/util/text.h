// Copyright 2026 The llmref Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LLMREF_UTIL_TEXT_H_
#define LLMREF_UTIL_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace llmref::text {

std::string to_lower(std::string_view s);
std::string_view trim(std::string_view s);

// Whitespace split, no case folding.
std::vector<std::string> split_whitespace(std::string_view s);

// Whitespace split after lowercasing. This is the tokenization shared by the
// vocabulary, ROUGE and the mock reference model.
std::vector<std::string> tokenize(std::string_view s);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

// Splits whitespace tokens into sentences. A sentence ends at a token whose
// last character is '.', '!' or '?'. Trailing tokens without a terminator form
// a final sentence.
std::vector<std::string> split_sentences(std::string_view s);

// First `count` sentences joined with single spaces.
std::string lead_sentences(std::string_view s, size_t count);

bool starts_with_ci(std::string_view s, std::string_view prefix);

// Position of the first case-insensitive occurrence of `needle`, or npos.
size_t find_ci(std::string_view haystack, std::string_view needle);

}  // namespace llmref::text

#endif  // LLMREF_UTIL_TEXT_H_

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

#include "llmref/eval/rouge.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "llmref/util/text.h"

namespace llmref::eval {

namespace {

std::unordered_map<std::string, size_t> count_ngrams(const std::vector<std::string>& toks,
                                                     int n, size_t* total) {
  std::unordered_map<std::string, size_t> counts;
  *total = 0;
  if (toks.size() < static_cast<size_t>(n)) return counts;
  for (size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key = toks[i];
    for (int j = 1; j < n; ++j) {
      key += '\x1f';
      key += toks[i + j];
    }
    ++counts[key];
    ++*total;
  }
  return counts;
}

}  // namespace

double NgramOverlap::precision() const {
  return candidate_ngrams == 0 ? 0.0
                               : static_cast<double>(overlap) / candidate_ngrams;
}

double NgramOverlap::recall() const {
  return reference_ngrams == 0 ? 0.0
                               : static_cast<double>(overlap) / reference_ngrams;
}

double NgramOverlap::f1() const {
  if (overlap == 0) return 0.0;
  return 2.0 * static_cast<double>(overlap) /
         static_cast<double>(candidate_ngrams + reference_ngrams);
}

NgramOverlap ngram_overlap(std::string_view candidate, std::string_view reference,
                           int n) {
  if (n < 1) throw std::invalid_argument("n-gram order must be >= 1");
  NgramOverlap out;
  const auto cand = count_ngrams(text::tokenize(candidate), n, &out.candidate_ngrams);
  const auto ref = count_ngrams(text::tokenize(reference), n, &out.reference_ngrams);
  for (const auto& [gram, c] : cand) {
    auto it = ref.find(gram);
    if (it != ref.end()) out.overlap += std::min(c, it->second);
  }
  return out;
}

double rouge_f1(std::string_view candidate, std::string_view reference, int n) {
  if (n != 1 && n != 2) throw std::invalid_argument("ROUGE order must be 1 or 2");
  return ngram_overlap(candidate, reference, n).f1();
}

}  // namespace llmref::eval

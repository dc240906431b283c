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

#ifndef LLMREF_EVAL_ROUGE_H_
#define LLMREF_EVAL_ROUGE_H_

#include <string_view>

namespace llmref::eval {

// Clipped n-gram multiset overlap after lowercasing and whitespace
// tokenisation. No stemming, no stopword removal.
struct NgramOverlap {
  size_t overlap = 0;
  size_t candidate_ngrams = 0;
  size_t reference_ngrams = 0;

  double precision() const;
  double recall() const;
  // 2 * overlap / (|candidate| + |reference|); 0 when either side is empty.
  double f1() const;
};

NgramOverlap ngram_overlap(std::string_view candidate, std::string_view reference,
                           int n);

// ROUGE-n F1 in [0, 1] for n in {1, 2}. Throws std::invalid_argument otherwise.
double rouge_f1(std::string_view candidate, std::string_view reference, int n);

}  // namespace llmref::eval

#endif  // LLMREF_EVAL_ROUGE_H_

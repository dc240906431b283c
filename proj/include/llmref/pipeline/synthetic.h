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

#ifndef LLMREF_PIPELINE_SYNTHETIC_H_
#define LLMREF_PIPELINE_SYNTHETIC_H_

#include <cstdint>
#include <vector>

#include "llmref/corpus/corpus.h"

namespace llmref::pipeline {

// Generates news-like articles from small word pools. Each article opens with
// three sentences about one subject and continues with sentences about other
// subjects, so a lead-based reference depends on the document. Sentence
// punctuation is a separate token.
struct SyntheticConfig {
  size_t documents = 300;
  uint64_t seed = 1;
  int min_filler_sentences = 3;
  int max_filler_sentences = 5;
};

std::vector<corpus::Example> generate_corpus(const SyntheticConfig& config);

}  // namespace llmref::pipeline

#endif  // LLMREF_PIPELINE_SYNTHETIC_H_

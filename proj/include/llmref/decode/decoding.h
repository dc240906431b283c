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

#ifndef LLMREF_DECODE_DECODING_H_
#define LLMREF_DECODE_DECODING_H_

#include <string>
#include <vector>

#include "llmref/lm/model.h"

namespace llmref::decode {

struct BeamConfig {
  int groups = 1;
  int beams_per_group = 1;
  double diversity_penalty = 1.0;
  int max_len = 40;
  int min_len = 0;  // tokens required before EOS may be emitted

  void validate() const;
};

struct Hypothesis {
  lm::TokenSeq seq;          // BOS + generated tokens (EOS included if emitted)
  double log_prob = 0.0;     // sum of token log-probabilities
  double penalty = 0.0;      // accumulated diversity count
  double score = 0.0;        // log_prob / length - gamma * penalty

  bool finished() const {
    return !seq.ids.empty() && seq.ids.back() == lm::Vocabulary::kEos;
  }
  double normalized_log_prob() const {
    return seq.length() == 0 ? 0.0 : log_prob / static_cast<double>(seq.length());
  }
};

struct BeamResult {
  std::vector<std::vector<Hypothesis>> groups;  // groups[g] best-first

  std::vector<Hypothesis> flatten() const;
};

// Argmax decoding (BOS is never emitted). Stops after EOS or max_len tokens.
lm::TokenSeq greedy_decode(const lm::ToyLM& model, const lm::TokenSeq& document,
                           int max_len);

// Group-wise beam search with a Hamming diversity penalty. At every step group
// g scores token v with gamma * (times v was chosen at this step by groups
// < g). Hypotheses are ranked by length-normalised log-probability minus the
// accumulated penalty. Ties go to the lower token id, then the lower parent
// beam.
BeamResult diverse_beam_search(const lm::ToyLM& model, const lm::TokenSeq& document,
                               const BeamConfig& config);

// Pairwise similarity used for subset selection.
using SimilarityMatrix = std::vector<std::vector<double>>;

// ROUGE-1 F1 between every pair of candidates.
SimilarityMatrix rouge1_similarity(const std::vector<std::string>& candidates);

// Greedy farthest-point selection: start from candidate 0 (the top-scored
// one), then repeatedly add the candidate whose maximum similarity to the
// selected set is smallest; ties go to the lower index. Returns indices in
// selection order.
std::vector<size_t> select_diverse_subset(const SimilarityMatrix& similarity, size_t k);
std::vector<std::string> select_diverse_subset(const std::vector<std::string>& candidates,
                                               size_t k);

enum class PoolSelection {
  kFirstOfGroup,   // best beam of each group
  kDiverseSubset,  // best beam of each group, then similarity-minimising subset
};

// Distinct non-empty candidate texts for one document. Pool order for the
// diverse subset is by model normalised log-probability, best first.
std::vector<std::string> generate_candidates(const lm::ToyLM& model,
                                             const lm::TokenSeq& document,
                                             const BeamConfig& config,
                                             PoolSelection selection, size_t count);

}  // namespace llmref::decode

#endif  // LLMREF_DECODE_DECODING_H_

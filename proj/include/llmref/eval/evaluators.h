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

#ifndef LLMREF_EVAL_EVALUATORS_H_
#define LLMREF_EVAL_EVALUATORS_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "llmref/corpus/corpus.h"
#include "llmref/eval/parsing.h"
#include "llmref/llm/client.h"
#include "llmref/llm/prompts.h"

namespace llmref::eval {

// An evaluator gave up on an example. `raw_response` holds the last reply so
// it can be inspected.
class EvaluationError : public std::runtime_error {
 public:
  EvaluationError(const std::string& what, std::string raw_response)
      : std::runtime_error(what), raw_response_(std::move(raw_response)) {}
  const std::string& raw_response() const { return raw_response_; }

 private:
  std::string raw_response_;
};

// Mean per-token log-probability of `candidate` as a continuation of the
// rendered generation prompt. Uses the generation template by default.
double gpt_score(llm::LlmClient& client, std::string_view article,
                 std::string_view candidate,
                 std::string_view prompt_template = llm::assets::kGenerateV1);

struct ListwiseOptions {
  int max_candidates = 8;
  int max_reprompts = 2;
};

Ranking rank_listwise(llm::LlmClient& client, std::string_view article,
                      const std::vector<std::string>& candidates,
                      const ListwiseOptions& options = {});

struct PairwiseOptions {
  bool debias = false;  // also ask with the summaries swapped; disagreement is a tie
  int max_reprompts = 2;
};

PairDecision compare_pairwise(llm::LlmClient& client, std::string_view article,
                              std::string_view s1, std::string_view s2,
                              const PairwiseOptions& options = {});

struct Tally {
  long wins = 0;
  long losses = 0;
  long ties = 0;

  long total() const { return wins + losses + ties; }
  bool operator==(const Tally&) const = default;
};

// First-position outcomes count as wins.
Tally tally(const std::vector<PairDecision>& decisions);

// Candidate orderings. Both return a copy of `candidates` with order, source
// and (for GPTScore) scores filled in. GPTScore ties keep index order.
corpus::CandidateSet order_by_gpt_score(llm::LlmClient& client, std::string_view article,
                                        const std::vector<std::string>& candidates);
corpus::CandidateSet order_by_gpt_rank(llm::LlmClient& client, std::string_view article,
                                       const std::vector<std::string>& candidates,
                                       const ListwiseOptions& options = {});

// Indices sorted by score descending, ties by index; 1-based.
std::vector<int> order_from_scores(const std::vector<double>& scores);

// Kendall tau-b between two score vectors over the same items. Returns nullopt
// when either side is constant (the coefficient is undefined).
std::optional<double> kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace llmref::eval

#endif  // LLMREF_EVAL_EVALUATORS_H_

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

#include "llmref/eval/evaluators.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "llmref/llm/prompts.h"
#include "llmref/util/log.h"
#include "llmref/util/text.h"

namespace llmref::eval {

double gpt_score(llm::LlmClient& client, std::string_view article,
                 std::string_view candidate, std::string_view prompt_template) {
  if (text::split_whitespace(candidate).empty()) {
    throw llm::LlmError(llm::LlmError::Kind::kInvalidRequest,
                        "gpt_score: candidate has no tokens");
  }
  const std::string context =
      llm::render_template(prompt_template, {{"Article", std::string(article)}});
  const std::vector<double> lps =
      llm::score_continuation(client, context, " " + std::string(candidate));
  if (lps.empty()) {
    throw llm::LlmError(llm::LlmError::Kind::kMalformedReply,
                        "gpt_score: backend returned no continuation tokens");
  }
  return std::accumulate(lps.begin(), lps.end(), 0.0) / static_cast<double>(lps.size());
}

Ranking rank_listwise(llm::LlmClient& client, std::string_view article,
                      const std::vector<std::string>& candidates,
                      const ListwiseOptions& options) {
  const int n = static_cast<int>(candidates.size());
  if (n < 2 || n > options.max_candidates) {
    throw llm::LlmError(llm::LlmError::Kind::kInvalidRequest,
                        "rank_listwise: need 2.." + std::to_string(options.max_candidates) +
                            " candidates, got " + std::to_string(n));
  }
  llm::LlmRequest request = client.make_request(llm::render_listwise_prompt(article, candidates));
  std::string last;
  for (int attempt = 0; attempt <= options.max_reprompts; ++attempt) {
    request.attempt = attempt;
    last = client.complete(request).text;
    try {
      return parse_ranking(last, n);
    } catch (const ParseError& e) {
      log::warn("rank_listwise: attempt " + std::to_string(attempt) + ": " + e.what());
    }
  }
  throw EvaluationError("rank_listwise: unparseable response after " +
                            std::to_string(options.max_reprompts + 1) + " attempts",
                        last);
}

namespace {

PairDecision ask_pair(llm::LlmClient& client, std::string_view article, std::string_view s1,
                      std::string_view s2, int max_reprompts) {
  llm::LlmRequest request = client.make_request(llm::render_pairwise_prompt(article, s1, s2));
  std::string last;
  for (int attempt = 0; attempt <= max_reprompts; ++attempt) {
    request.attempt = attempt;
    last = client.complete(request).text;
    try {
      return parse_decision(last);
    } catch (const ParseError& e) {
      log::warn("compare_pairwise: attempt " + std::to_string(attempt) + ": " + e.what());
    }
  }
  throw EvaluationError("compare_pairwise: unparseable response after " +
                            std::to_string(max_reprompts + 1) + " attempts",
                        last);
}

PairOutcome swap(PairOutcome o) {
  if (o == PairOutcome::kFirst) return PairOutcome::kSecond;
  if (o == PairOutcome::kSecond) return PairOutcome::kFirst;
  return o;
}

}  // namespace

PairDecision compare_pairwise(llm::LlmClient& client, std::string_view article,
                              std::string_view s1, std::string_view s2,
                              const PairwiseOptions& options) {
  if (text::trim(s1).empty() || text::trim(s2).empty()) {
    throw llm::LlmError(llm::LlmError::Kind::kInvalidRequest,
                        "compare_pairwise: empty summary");
  }
  PairDecision forward = ask_pair(client, article, s1, s2, options.max_reprompts);
  if (!options.debias) return forward;
  const PairDecision backward = ask_pair(client, article, s2, s1, options.max_reprompts);
  if (swap(backward.outcome) != forward.outcome) forward.outcome = PairOutcome::kTie;
  return forward;
}

Tally tally(const std::vector<PairDecision>& decisions) {
  Tally t;
  for (const auto& d : decisions) {
    switch (d.outcome) {
      case PairOutcome::kFirst:
        ++t.wins;
        break;
      case PairOutcome::kSecond:
        ++t.losses;
        break;
      case PairOutcome::kTie:
        ++t.ties;
        break;
    }
  }
  return t;
}

std::vector<int> order_from_scores(const std::vector<double>& scores) {
  std::vector<int> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  for (int& i : order) ++i;
  return order;
}

corpus::CandidateSet order_by_gpt_score(llm::LlmClient& client, std::string_view article,
                                        const std::vector<std::string>& candidates) {
  corpus::CandidateSet set;
  set.candidates = candidates;
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(gpt_score(client, article, c));
  set.order = order_from_scores(scores);
  set.scores = std::move(scores);
  set.order_source = corpus::OrderSource::kGptScore;
  return set;
}

corpus::CandidateSet order_by_gpt_rank(llm::LlmClient& client, std::string_view article,
                                       const std::vector<std::string>& candidates,
                                       const ListwiseOptions& options) {
  corpus::CandidateSet set;
  set.candidates = candidates;
  set.order = rank_listwise(client, article, candidates, options).permutation;
  set.order_source = corpus::OrderSource::kGptRankList;
  return set;
}

std::optional<double> kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("kendall_tau: size mismatch");
  long concordant = 0, discordant = 0, tied_x = 0, tied_y = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    for (size_t j = i + 1; j < x.size(); ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0 && dy == 0) continue;
      if (dx == 0) {
        ++tied_x;
      } else if (dy == 0) {
        ++tied_y;
      } else if ((dx > 0) == (dy > 0)) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const double nx = static_cast<double>(concordant + discordant + tied_y);
  const double ny = static_cast<double>(concordant + discordant + tied_x);
  if (nx == 0 || ny == 0) return std::nullopt;
  return static_cast<double>(concordant - discordant) / std::sqrt(nx * ny);
}

}  // namespace llmref::eval

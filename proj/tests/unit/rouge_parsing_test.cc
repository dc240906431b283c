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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "llmref/eval/parsing.h"
#include "llmref/eval/rouge.h"
#include "llmref/util/rng.h"
#include "support/oracles.h"

namespace llmref::eval {
namespace {

TEST(RougeTest, WorkedExample) {
  EXPECT_DOUBLE_EQ(rouge_f1("the cat sat", "the cat ran", 1), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(rouge_f1("the cat sat", "the cat ran", 2), 0.5);
}

TEST(RougeTest, IdenticalAndDisjoint) {
  EXPECT_EQ(rouge_f1("a b c a", "a b c a", 1), 1.0);
  EXPECT_EQ(rouge_f1("a b c a", "a b c a", 2), 1.0);
  EXPECT_EQ(rouge_f1("a b", "c d", 1), 0.0);
}

TEST(RougeTest, EmptySidesScoreZero) {
  EXPECT_EQ(rouge_f1("", "a b", 1), 0.0);
  EXPECT_EQ(rouge_f1("a b", "", 1), 0.0);
  EXPECT_EQ(rouge_f1("a", "a", 2), 0.0);  // no bigrams
}

TEST(RougeTest, CaseInsensitiveAndClipped) {
  EXPECT_EQ(rouge_f1("The CAT", "the cat", 1), 1.0);
  const auto o = ngram_overlap("a a a", "a b", 1);
  EXPECT_EQ(o.overlap, 1u);
  EXPECT_EQ(o.candidate_ngrams, 3u);
  EXPECT_EQ(o.reference_ngrams, 2u);
  EXPECT_DOUBLE_EQ(o.precision(), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(o.recall(), 0.5);
}

TEST(RougeTest, RejectsOtherOrders) {
  EXPECT_THROW(rouge_f1("a", "a", 3), std::invalid_argument);
  EXPECT_THROW(rouge_f1("a", "a", 0), std::invalid_argument);
}

TEST(RougeTest, MatchesBruteForceAndIsSymmetric) {
  Rng rng(17);
  const std::vector<std::string> words{"a", "b", "c", "d", "e"};
  auto random_text = [&] {
    std::string s;
    const size_t len = rng.uniform_index(7);
    for (size_t i = 0; i < len; ++i) s += (i ? " " : "") + words[rng.uniform_index(words.size())];
    return s;
  };
  for (int i = 0; i < 200; ++i) {
    const auto x = random_text();
    const auto y = random_text();
    for (int n : {1, 2}) {
      EXPECT_EQ(rouge_f1(x, y, n), testing::brute_rouge_f1(x, y, n)) << x << " | " << y;
      EXPECT_EQ(rouge_f1(x, y, n), rouge_f1(y, x, n));
    }
  }
}

TEST(ParseRankingTest, TemplateExample) {
  const auto r = parse_ranking("Explanation: e\nRanking: 4, 2, 7, 3, 5, 6, 8, 1", 8);
  EXPECT_EQ(r.permutation, (std::vector<int>{4, 2, 7, 3, 5, 6, 8, 1}));
  EXPECT_EQ(r.explanation, "e");
}

TEST(ParseRankingTest, TwoCandidates) {
  EXPECT_EQ(parse_ranking("Ranking: 2, 1", 2).permutation, (std::vector<int>{2, 1}));
}

TEST(ParseRankingTest, ToleratesCommonDecoration) {
  EXPECT_EQ(parse_ranking("**Ranking:** 2, 3, 1.", 3).permutation, (std::vector<int>{2, 3, 1}));
  EXPECT_EQ(parse_ranking("ranking: [3,1,2]", 3).permutation, (std::vector<int>{3, 1, 2}));
  EXPECT_EQ(parse_ranking("Ranking: \"1, 2\"", 2).permutation, (std::vector<int>{1, 2}));
  const auto r = parse_ranking("Summary 2 is best.\nRanking: 2, 1\nRanking: 1, 2", 2);
  EXPECT_EQ(r.permutation, (std::vector<int>{2, 1}));
  EXPECT_EQ(r.explanation, "Summary 2 is best.");
}

ParseError::Kind ranking_error(const std::string& text, int n) {
  try {
    parse_ranking(text, n);
  } catch (const ParseError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error for: " << text;
  return ParseError::Kind::kInvalidDecision;
}

TEST(ParseRankingTest, ErrorKinds) {
  using K = ParseError::Kind;
  EXPECT_EQ(ranking_error("Explanation: fine", 2), K::kMissingMarker);
  EXPECT_EQ(ranking_error("Ranking: 1, 1, 2", 3), K::kDuplicate);
  EXPECT_EQ(ranking_error("Ranking: 1, 2", 3), K::kWrongCount);
  EXPECT_EQ(ranking_error("Ranking: 1, 4, 2", 3), K::kOutOfRange);
  EXPECT_EQ(ranking_error("Ranking: 0, 1", 2), K::kOutOfRange);
  EXPECT_EQ(ranking_error("Ranking: one, two", 2), K::kInvalidEntry);
  EXPECT_EQ(ranking_error("Ranking: 1, -2", 2), K::kInvalidEntry);
  EXPECT_EQ(ranking_error("Ranking:", 2), K::kInvalidEntry);
}

TEST(ParseRankingTest, RoundTripsEveryPermutationUpToFour) {
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    do {
      const Ranking r{p, "because"};
      EXPECT_EQ(parse_ranking(format_ranking(r), n), r);
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST(ParseRankingTest, RoundTripsRandomPermutations) {
  Rng rng(5);
  for (int i = 0; i < 200; ++i) {
    const int n = 5 + static_cast<int>(rng.uniform_index(4));
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    rng.shuffle(p);
    const Ranking r{p, "line one\nline two"};
    EXPECT_EQ(parse_ranking(format_ranking(r), n), r);
  }
}

TEST(ParseDecisionTest, Examples) {
  const auto tie = parse_decision("Explanation: e\nDecision: tie");
  EXPECT_EQ(tie.outcome, PairOutcome::kTie);
  EXPECT_EQ(tie.explanation, "e");
  EXPECT_EQ(parse_decision("Decision: 1").outcome, PairOutcome::kFirst);
  EXPECT_EQ(parse_decision("Decision: 2.").outcome, PairOutcome::kSecond);
  EXPECT_EQ(parse_decision("**Decision:** TIE").outcome, PairOutcome::kTie);
}

TEST(ParseDecisionTest, RejectsEverythingElse) {
  for (const char* text : {"Decision: maybe", "Decision: 3", "Decision: 1 or 2", "Decision:",
                           "Decision: 12", "no marker here", "Decision: both"}) {
    EXPECT_THROW(parse_decision(text), ParseError) << text;
  }
}

TEST(ParseDecisionTest, ToString) {
  EXPECT_EQ(to_string(PairOutcome::kFirst), "1");
  EXPECT_EQ(to_string(PairOutcome::kSecond), "2");
  EXPECT_EQ(to_string(PairOutcome::kTie), "tie");
}

}  // namespace
}  // namespace llmref::eval

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

#include <cmath>
#include <filesystem>
#include <numeric>

#include "llmref/lm/model.h"
#include "llmref/lm/vocab.h"
#include "llmref/util/rng.h"
#include "support/oracles.h"

namespace llmref::lm {
namespace {

TEST(VocabTest, FrequencyCutoff) {
  const auto v = build_vocab({"a a b"}, 2);
  EXPECT_EQ(v.size(), 4);
  EXPECT_EQ(v.token(3), "a");
  EXPECT_EQ(v.id_of("b"), Vocabulary::kUnk);
}

TEST(VocabTest, SpecialsPlusEveryToken) {
  const auto v = build_vocab({"x y"}, 1);
  EXPECT_EQ(v.size(), 5);
  EXPECT_NE(v.id_of("x"), Vocabulary::kUnk);
  EXPECT_NE(v.id_of("y"), Vocabulary::kUnk);
  EXPECT_EQ(v.token(Vocabulary::kBos), "<bos>");
}

TEST(VocabTest, OrderIsFrequencyThenLexicographic) {
  const auto v = build_vocab({"b c c a", "a c d"}, 1);
  EXPECT_EQ(v.tokens(), (std::vector<std::string>{"<bos>", "<eos>", "<unk>", "c", "a", "b", "d"}));
  EXPECT_EQ(build_vocab({"b c c a", "a c d"}, 1), v);
}

TEST(VocabTest, Errors) {
  EXPECT_THROW(build_vocab({}, 1), VocabError);
  EXPECT_THROW(build_vocab({"a"}, 2), VocabError);  // N would be 3
  EXPECT_THROW(Vocabulary({"a", "a"}), VocabError);
}

TEST(VocabTest, EncodeDecode) {
  const auto v = build_vocab({"the cat sat"}, 1);
  const auto empty = v.encode("");
  EXPECT_EQ(empty.ids, std::vector<int>{Vocabulary::kBos});
  EXPECT_EQ(empty.length(), 0u);
  EXPECT_EQ(v.decode(v.encode("the cat sat")), "the cat sat");
  EXPECT_EQ(v.encode("the dog").ids.back(), Vocabulary::kUnk);
  EXPECT_EQ(v.decode(with_eos(v.encode("cat"))), "cat");
  EXPECT_EQ(v.encode("The CAT").ids, v.encode("the cat").ids);
}

TEST(ForwardTest, IsADistribution) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto model = testing::random_model(6, seed, 5, 3, 7, 2.0);
    Rng rng(seed);
    const auto doc = testing::random_seq(rng, model.vocab_size(), 6, false);
    const auto prefix = testing::random_seq(rng, model.vocab_size(), 4, false);
    const auto p = model.forward(doc, prefix);
    ASSERT_EQ(static_cast<int>(p.size()), model.vocab_size());
    EXPECT_NEAR(std::accumulate(p.begin(), p.end(), 0.0), 1.0, 1e-9);
    for (double x : p) EXPECT_GT(x, 0.0);
    EXPECT_EQ(p, model.forward(doc, prefix));
  }
}

TEST(ForwardTest, ZeroOutputProjectionIsUniform) {
  auto model = testing::random_model(5, 3);
  for (double& w : model.block(ToyLM::kOutW)) w = 0.0;
  for (double& b : model.block(ToyLM::kOutB)) b = 0.0;
  Rng rng(1);
  const auto p = model.forward(testing::random_seq(rng, model.vocab_size(), 3, false),
                               testing::random_seq(rng, model.vocab_size(), 2, false));
  for (double x : p) EXPECT_DOUBLE_EQ(x, 1.0 / model.vocab_size());
}

TEST(ForwardTest, OnlyTheLastKTokensMatter) {
  const auto model = testing::random_model(5, 4, 4, 2, 6);
  Rng rng(2);
  const auto doc = testing::random_seq(rng, model.vocab_size(), 4, false);
  const TokenSeq a{{Vocabulary::kBos, 3, 4, 5}};
  const TokenSeq b{{Vocabulary::kBos, 6, 4, 5}};
  const TokenSeq c{{Vocabulary::kBos, 3, 6, 5}};
  EXPECT_EQ(model.forward(doc, a), model.forward(doc, b));
  EXPECT_NE(model.forward(doc, a), model.forward(doc, c));
}

TEST(ForwardTest, RejectsBadPrefixes) {
  const auto model = testing::random_model(3, 1);
  const TokenSeq doc{{Vocabulary::kBos, 3}};
  EXPECT_THROW(model.forward(doc, TokenSeq{{3}}), VocabError);
  EXPECT_THROW(model.forward(doc, TokenSeq{{Vocabulary::kBos, 99}}), VocabError);
}

using testing::fixed_distribution_model;

TEST(SequenceLogProbTest, ProductOfTokenProbabilities) {
  // Tokens 3 and 4 get 0.5 and 0.25; the rest share 0.25.
  const auto model = fixed_distribution_model({0.0625, 0.0625, 0.0625, 0.5, 0.25, 0.0625});
  const TokenSeq doc{{Vocabulary::kBos, 5}};
  EXPECT_NEAR(sequence_log_prob(model, doc, TokenSeq{{Vocabulary::kBos, 3, 4}}), std::log(0.125),
              1e-12);
  EXPECT_NEAR(std::log(0.125), -2.0794, 1e-4);
}

TEST(SequenceLogProbTest, NormalizedIsTheMean) {
  const double rest = (1.0 - std::exp(-1.0) - std::exp(-2.0) - std::exp(-3.0)) / 4.0;
  const auto model =
      fixed_distribution_model({rest, rest, rest, std::exp(-1.0), std::exp(-2.0), std::exp(-3.0), rest});
  const TokenSeq doc{{Vocabulary::kBos, 6}};
  EXPECT_NEAR(normalized_log_prob(model, doc, TokenSeq{{Vocabulary::kBos, 3, 4, 5}}), -2.0, 1e-12);
}

TEST(SequenceLogProbTest, CertainTokenScoresZero) {
  auto model = fixed_distribution_model({0.25, 0.25, 0.25, 0.25});
  for (double& b : model.block(ToyLM::kOutB)) b = -1000.0;
  model.block(ToyLM::kOutB)[3] = 0.0;
  const TokenSeq doc{{Vocabulary::kBos, 3}};
  EXPECT_EQ(sequence_log_prob(model, doc, TokenSeq{{Vocabulary::kBos, 3}}), 0.0);
}

TEST(SequenceLogProbTest, MatchesPerPositionOracle) {
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    const auto model = testing::random_model(5, seed);
    Rng rng(seed + 100);
    const auto doc = testing::random_seq(rng, model.vocab_size(), 5, false);
    const auto s = testing::random_seq(rng, model.vocab_size(), 1 + rng.uniform_index(5), true);
    double oracle = 0.0;
    for (size_t t = 0; t + 1 < s.ids.size(); ++t) {
      TokenSeq prefix{{s.ids.begin(), s.ids.begin() + t + 1}};
      oracle += std::log(model.forward(doc, prefix)[s.ids[t + 1]]);
    }
    const double lp = sequence_log_prob(model, doc, s);
    EXPECT_NEAR(lp, oracle, 1e-9);
    EXPECT_LE(lp, 0.0);
    EXPECT_NEAR(normalized_log_prob(model, doc, s) * s.length(), lp, 1e-9);

    TokenSeq longer = s;
    longer.ids.push_back(3);
    EXPECT_LE(sequence_log_prob(model, doc, longer), lp);
  }
}

TEST(SequenceLogProbTest, EmptySummaryPolicy) {
  const auto model = testing::random_model(3, 1);
  const TokenSeq doc{{Vocabulary::kBos, 3}};
  const TokenSeq empty{{Vocabulary::kBos}};
  EXPECT_THROW(sequence_log_prob(model, doc, empty), std::invalid_argument);
  EXPECT_EQ(sequence_log_prob(model, doc, empty, EmptyPolicy::kAllowEmpty), 0.0);
  EXPECT_THROW(normalized_log_prob(model, doc, empty), std::invalid_argument);
}

TEST(ClampedLogTest, FloorsTinyProbabilities) {
  EXPECT_EQ(clamped_log(0.0), std::log(kProbFloor));
  EXPECT_EQ(clamped_log(0.5), std::log(0.5));
}

TEST(CheckpointTest, RoundTripIsExact) {
  const auto model = testing::random_model(6, 11, 5, 3, 7);
  const auto path = std::filesystem::temp_directory_path() / "llmref_ckpt_test.json";
  save_checkpoint(model, path);
  const auto loaded = load_checkpoint(path);
  std::filesystem::remove(path);
  EXPECT_TRUE(loaded == model);
  EXPECT_EQ(loaded.parameter_count(), model.parameter_count());
}

TEST(ModelTest, SameSeedSameParameters) {
  const auto a = testing::random_model(4, 9);
  const auto b = testing::random_model(4, 9);
  const auto c = testing::random_model(4, 10);
  EXPECT_TRUE(a == b);
  EXPECT_FALSE(a == c);
  EXPECT_TRUE(a.all_finite());
}

}  // namespace
}  // namespace llmref::lm

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

#ifndef LLMREF_LOSS_LOSSES_H_
#define LLMREF_LOSS_LOSSES_H_

#include <filesystem>
#include <fstream>
#include <span>
#include <stdexcept>
#include <vector>

#include "llmref/corpus/corpus.h"
#include "llmref/lm/model.h"

namespace llmref::loss {

class LossError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct LossConfig {
  double beta = 0.1;     // label-smoothing mass spread over non-target tokens
  double lambda = 1.0;   // length scale of the normalised margin
  double alpha = 1.0;    // contrastive weight in the multi-task loss
  bool normalize = true; // length-normalised scores and margins

  void validate() const;
};

// Token-level cross-entropy against a smoothed target that puts 1 - beta on
// the realised token and beta / (N - 1) on every other token, summed over the
// target positions.
double label_smoothed_ce(const lm::ToyLM& model, const lm::DocumentContext& doc,
                         const lm::TokenSeq& target, double beta);
double label_smoothed_ce(const lm::ToyLM& model, const lm::TokenSeq& document,
                         const lm::TokenSeq& target, double beta);

// Pairwise margin loss over candidates ordered best-first:
//   sum_{i<j} max(0, score(S_j) - score(S_i) + margin(j - i))
// where score is the length-normalised log-probability and margin is
// ln(2(j-i)) / lambda when `normalize`, else the raw log-probability and
// ln(2(j-i)).
double contrastive_loss(const lm::ToyLM& model, const lm::DocumentContext& doc,
                        std::span<const lm::TokenSeq> ranked, double lambda,
                        bool normalize);
double contrastive_loss(const lm::ToyLM& model, const lm::TokenSeq& document,
                        const corpus::CandidateSet& candidates, double lambda,
                        bool normalize);

// label_smoothed_ce + alpha * contrastive_loss.
double multi_task_loss(const lm::ToyLM& model, const lm::DocumentContext& doc,
                       const lm::TokenSeq& target,
                       std::span<const lm::TokenSeq> ranked, const LossConfig& config);
double multi_task_loss(const lm::ToyLM& model, const lm::TokenSeq& document,
                       const lm::TokenSeq& target,
                       const corpus::CandidateSet& candidates, const LossConfig& config);

// Best-first candidate token sequences (EOS-terminated) for a ranked set.
std::vector<lm::TokenSeq> ranked_sequences(const lm::Vocabulary& vocab,
                                           const corpus::CandidateSet& candidates);

struct Objective {
  enum class Kind { kLabelSmoothedCe, kContrastive, kMultiTask };

  Kind kind = Kind::kLabelSmoothedCe;
  lm::TokenSeq target;
  std::vector<lm::TokenSeq> ranked;
  LossConfig config;
};

struct LossTerms {
  double ce = 0.0;
  double ctr = 0.0;
  double total = 0.0;
};

LossTerms evaluate(const lm::ToyLM& model, const lm::DocumentContext& doc,
                   const Objective& objective);

// Adds d(objective)/d(theta) into `grad` and returns the loss terms.
LossTerms accumulate_gradient(const lm::ToyLM& model, const lm::DocumentContext& doc,
                              const Objective& objective, lm::Gradients& grad);

lm::Gradients backward(const lm::ToyLM& model, const lm::TokenSeq& document,
                       const Objective& objective);

// theta <- theta - learning_rate * grad.
void sgd_step(lm::ToyLM& model, const lm::Gradients& grad, double learning_rate);

// One JSON object per optimiser step.
struct StepRecord {
  size_t step = 0;
  size_t epoch = 0;
  LossTerms terms;
  double grad_norm = 0.0;
  LossConfig config;
};

class TrainingLog {
 public:
  TrainingLog() = default;
  explicit TrainingLog(const std::filesystem::path& path);

  void write(const StepRecord& record);
  bool enabled() const { return out_.is_open(); }

 private:
  std::ofstream out_;
};

}  // namespace llmref::loss

#endif  // LLMREF_LOSS_LOSSES_H_

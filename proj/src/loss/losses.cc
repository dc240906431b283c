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

#include "llmref/loss/losses.h"

#include <cmath>

#include "json.hpp"

namespace llmref::loss {

using lm::DocumentContext;
using lm::Gradients;
using lm::TokenSeq;
using lm::ToyLM;

void LossConfig::validate() const {
  if (!(beta >= 0.0 && beta < 1.0)) throw LossError("beta must lie in [0, 1)");
  if (!(lambda > 0.0)) throw LossError("lambda must be > 0");
  if (!(alpha >= 0.0)) throw LossError("alpha must be >= 0");
}

namespace {

void check_target(const TokenSeq& target) {
  if (target.length() == 0) throw LossError("target summary is empty");
}

void check_ranked(std::span<const TokenSeq> ranked) {
  if (ranked.size() < 2) throw LossError("contrastive loss needs >= 2 candidates");
  for (const auto& c : ranked) {
    if (c.length() == 0) throw LossError("candidate summary is empty");
  }
}

double smoothed_target_mass(int n, int target, int s, double beta) {
  return s == target ? 1.0 - beta : beta / static_cast<double>(n - 1);
}

double ce_value(const ToyLM& model, const DocumentContext& doc, const TokenSeq& target,
                double beta) {
  const int n = model.vocab_size();
  double total = 0.0;
  std::span<const int> ids(target.ids);
  for (size_t pos = 0; pos < target.length(); ++pos) {
    const auto probs = model.forward(doc, ids.first(pos + 1));
    const int y = target.ids[pos + 1];
    for (int s = 0; s < n; ++s) {
      total -= smoothed_target_mass(n, y, s, beta) * lm::clamped_log(probs[s]);
    }
  }
  return total;
}

// Hinge weights d(loss)/d(score_c) for every candidate; returns the loss.
double contrastive_weights(std::span<const double> scores, double lambda, bool normalize,
                           std::vector<double>* weights) {
  const size_t n = scores.size();
  if (weights) weights->assign(n, 0.0);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double margin = std::log(2.0 * static_cast<double>(j - i));
      if (normalize) margin /= lambda;
      const double term = scores[j] - scores[i] + margin;
      if (term > 0.0) {
        total += term;
        if (weights) {
          (*weights)[j] += 1.0;
          (*weights)[i] -= 1.0;
        }
      }
    }
  }
  return total;
}

std::vector<double> candidate_scores(const ToyLM& model, const DocumentContext& doc,
                                     std::span<const TokenSeq> ranked, bool normalize) {
  std::vector<double> scores;
  scores.reserve(ranked.size());
  for (const auto& c : ranked) {
    scores.push_back(normalize ? lm::normalized_log_prob(model, doc, c)
                               : lm::sequence_log_prob(model, doc, c));
  }
  return scores;
}

}  // namespace

double label_smoothed_ce(const ToyLM& model, const DocumentContext& doc,
                         const TokenSeq& target, double beta) {
  check_target(target);
  if (!(beta >= 0.0 && beta < 1.0)) throw LossError("beta must lie in [0, 1)");
  model.vocab().check(target);
  return ce_value(model, doc, target, beta);
}

double label_smoothed_ce(const ToyLM& model, const TokenSeq& document,
                         const TokenSeq& target, double beta) {
  return label_smoothed_ce(model, model.encode_document(document), target, beta);
}

double contrastive_loss(const ToyLM& model, const DocumentContext& doc,
                        std::span<const TokenSeq> ranked, double lambda, bool normalize) {
  check_ranked(ranked);
  if (!(lambda > 0.0)) throw LossError("lambda must be > 0");
  const auto scores = candidate_scores(model, doc, ranked, normalize);
  return contrastive_weights(scores, lambda, normalize, nullptr);
}

std::vector<TokenSeq> ranked_sequences(const lm::Vocabulary& vocab,
                                       const corpus::CandidateSet& candidates) {
  if (!candidates.order || candidates.order_source == corpus::OrderSource::kUnordered) {
    throw LossError("contrastive loss needs an ordered candidate set");
  }
  candidates.validate();
  std::vector<TokenSeq> out;
  for (const auto& text : candidates.ranked()) {
    out.push_back(lm::with_eos(vocab.encode(text)));
  }
  return out;
}

double contrastive_loss(const ToyLM& model, const TokenSeq& document,
                        const corpus::CandidateSet& candidates, double lambda,
                        bool normalize) {
  const auto ranked = ranked_sequences(model.vocab(), candidates);
  return contrastive_loss(model, model.encode_document(document), ranked, lambda,
                          normalize);
}

double multi_task_loss(const ToyLM& model, const DocumentContext& doc,
                       const TokenSeq& target, std::span<const TokenSeq> ranked,
                       const LossConfig& config) {
  config.validate();
  return label_smoothed_ce(model, doc, target, config.beta) +
         config.alpha *
             contrastive_loss(model, doc, ranked, config.lambda, config.normalize);
}

double multi_task_loss(const ToyLM& model, const TokenSeq& document,
                       const TokenSeq& target, const corpus::CandidateSet& candidates,
                       const LossConfig& config) {
  const auto ranked = ranked_sequences(model.vocab(), candidates);
  return multi_task_loss(model, model.encode_document(document), target, ranked, config);
}

LossTerms evaluate(const ToyLM& model, const DocumentContext& doc,
                   const Objective& objective) {
  using K = Objective::Kind;
  const auto& cfg = objective.config;
  cfg.validate();
  LossTerms terms;
  if (objective.kind != K::kContrastive) {
    terms.ce = label_smoothed_ce(model, doc, objective.target, cfg.beta);
  }
  if (objective.kind != K::kLabelSmoothedCe) {
    terms.ctr = contrastive_loss(model, doc, objective.ranked, cfg.lambda, cfg.normalize);
  }
  terms.total = objective.kind == K::kContrastive ? terms.ctr
                : objective.kind == K::kMultiTask ? terms.ce + cfg.alpha * terms.ctr
                                                  : terms.ce;
  return terms;
}

LossTerms accumulate_gradient(const ToyLM& model, const DocumentContext& doc,
                              const Objective& objective, Gradients& grad) {
  using K = Objective::Kind;
  const auto& cfg = objective.config;
  cfg.validate();
  const int n = model.vocab_size();
  lm::DocumentBackprop bp(model, doc, grad);
  LossTerms terms;

  double ctr_scale = 0.0;
  if (objective.kind == K::kContrastive) ctr_scale = 1.0;
  if (objective.kind == K::kMultiTask) ctr_scale = cfg.alpha;

  if (objective.kind != K::kContrastive) {
    const auto& target = objective.target;
    check_target(target);
    model.vocab().check(target);
    const double beta = cfg.beta;
    const double off = beta / static_cast<double>(n - 1);
    bp.add_sequence(target, [&](size_t pos, std::span<const double> probs,
                                std::span<double> dlogits) {
      const int y = target.ids[pos + 1];
      // d/dz of -sum_s q_s log max(p_s, floor); clamped terms are constant.
      double mass = 0.0;
      for (int s = 0; s < n; ++s) {
        const double q = s == y ? 1.0 - beta : off;
        terms.ce -= q * lm::clamped_log(probs[s]);
        if (probs[s] >= lm::kProbFloor) {
          mass += q;
          dlogits[s] -= q;
        }
      }
      for (int s = 0; s < n; ++s) dlogits[s] += mass * probs[s];
    });
  }

  if (objective.kind != K::kLabelSmoothedCe) {
    check_ranked(objective.ranked);
    if (!(cfg.lambda > 0.0)) throw LossError("lambda must be > 0");
    const auto scores = candidate_scores(model, doc, objective.ranked, cfg.normalize);
    std::vector<double> weights;
    terms.ctr = contrastive_weights(scores, cfg.lambda, cfg.normalize, &weights);
    for (size_t c = 0; c < objective.ranked.size(); ++c) {
      if (weights[c] == 0.0 || ctr_scale == 0.0) continue;
      const auto& seq = objective.ranked[c];
      double w = ctr_scale * weights[c];
      if (cfg.normalize) w /= static_cast<double>(seq.length());
      // d log max(p_y, floor) / dz = e_y - p when p_y is above the floor.
      bp.add_sequence(seq, [&, w](size_t pos, std::span<const double> probs,
                                  std::span<double> dlogits) {
        const int y = seq.ids[pos + 1];
        if (probs[y] < lm::kProbFloor) return;
        for (int s = 0; s < n; ++s) dlogits[s] = -w * probs[s];
        dlogits[y] += w;
      });
    }
  }
  bp.finish();

  terms.total = objective.kind == K::kContrastive ? terms.ctr
                : objective.kind == K::kMultiTask ? terms.ce + cfg.alpha * terms.ctr
                                                  : terms.ce;
  return terms;
}

Gradients backward(const ToyLM& model, const TokenSeq& document,
                   const Objective& objective) {
  Gradients grad = model.zero_gradients();
  accumulate_gradient(model, model.encode_document(document), objective, grad);
  return grad;
}

void sgd_step(ToyLM& model, const Gradients& grad, double learning_rate) {
  if (!(learning_rate > 0.0)) throw LossError("learning rate must be > 0");
  if (grad.layout != model.layout() || grad.values.size() != model.parameter_count()) {
    throw LossError("gradient shape does not match model parameters");
  }
  if (!grad.all_finite()) throw LossError("gradient contains non-finite values");
  auto params = model.mutable_parameters();
  for (size_t i = 0; i < params.size(); ++i) params[i] -= learning_rate * grad.values[i];
}

TrainingLog::TrainingLog(const std::filesystem::path& path) : out_(path) {
  if (!out_) throw std::runtime_error("cannot open training log " + path.string());
}

void TrainingLog::write(const StepRecord& r) {
  if (!out_.is_open()) return;
  nlohmann::json j = {{"step", r.step},
                      {"epoch", r.epoch},
                      {"ce", r.terms.ce},
                      {"ctr", r.terms.ctr},
                      {"total", r.terms.total},
                      {"grad_norm", r.grad_norm},
                      {"alpha", r.config.alpha},
                      {"beta", r.config.beta},
                      {"lambda", r.config.lambda}};
  out_ << j.dump() << '\n';
  out_.flush();
}

}  // namespace llmref::loss

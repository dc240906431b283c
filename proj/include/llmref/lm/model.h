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

#ifndef LLMREF_LM_MODEL_H_
#define LLMREF_LM_MODEL_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "llmref/lm/vocab.h"

namespace llmref::lm {

// Floor applied to probabilities before taking logs, everywhere.
inline constexpr double kProbFloor = 1e-12;

double clamped_log(double p);

struct ModelConfig {
  int embed_dim = 16;
  int context = 4;  // number of previous tokens the decoder sees
  int hidden = 48;
  uint64_t seed = 1;
  double init_scale = 1.0;  // multiplies the fan-in scaled initialisation

  bool operator==(const ModelConfig&) const = default;
};

// A named rows x cols view into the flat parameter vector.
struct ParamBlock {
  std::string name;
  size_t rows = 0;
  size_t cols = 0;
  size_t offset = 0;

  size_t size() const { return rows * cols; }
  bool operator==(const ParamBlock&) const = default;
};

// Dense gradient with the same layout as the model parameters.
struct Gradients {
  std::vector<ParamBlock> layout;
  std::vector<double> values;

  std::span<double> block(size_t index) {
    return std::span<double>(values).subspan(layout[index].offset, layout[index].size());
  }
  double norm() const;
  bool all_finite() const;
  Gradients& operator+=(const Gradients& other);
  Gradients& operator*=(double scale);
};

// Document encoding shared by every prediction for that document.
struct DocumentContext {
  std::vector<int> tokens;       // document ids, BOS included
  std::vector<double> mean;      // mean token embedding
  std::vector<double> encoded;   // tanh(W_doc * mean + b_doc)
};

// Compact conditional autoregressive model:
//   doc    = tanh(W_doc * mean(E[document]) + b_doc)
//   h      = tanh(W_h * [doc; E[y_{t-k}]; ...; E[y_{t-1}]] + b_h)
//   p(y_t) = softmax(W_out * h + b_out)
// Prefix positions before the start are padded with BOS.
class ToyLM {
 public:
  enum Block : size_t { kEmbed, kDocW, kDocB, kHiddenW, kHiddenB, kOutW, kOutB };

  ToyLM(Vocabulary vocab, ModelConfig config);

  const Vocabulary& vocab() const { return vocab_; }
  const ModelConfig& config() const { return config_; }
  int vocab_size() const { return vocab_.size(); }
  size_t parameter_count() const { return params_.size(); }
  const std::vector<ParamBlock>& layout() const { return layout_; }

  std::span<const double> parameters() const { return params_; }
  std::span<double> mutable_parameters() { return params_; }
  std::span<double> block(Block b) {
    return std::span<double>(params_).subspan(layout_[b].offset, layout_[b].size());
  }
  std::span<const double> block(Block b) const {
    return std::span<const double>(params_).subspan(layout_[b].offset,
                                                    layout_[b].size());
  }

  Gradients zero_gradients() const;
  bool all_finite() const;

  DocumentContext encode_document(const TokenSeq& document) const;

  // Next-token distribution after `prefix` (which must begin with BOS).
  std::vector<double> forward(const DocumentContext& doc,
                              std::span<const int> prefix) const;
  std::vector<double> forward(const TokenSeq& document, const TokenSeq& prefix) const;

  // log p(s_i | s_<i, D) for every position of `summary` (length l_S).
  std::vector<double> token_log_probs(const DocumentContext& doc,
                                      const TokenSeq& summary) const;

  bool operator==(const ToyLM& other) const {
    return vocab_ == other.vocab_ && config_ == other.config_ &&
           params_ == other.params_;
  }

 private:
  friend class DocumentBackprop;

  struct StepState {
    std::vector<double> input;   // [doc; context embeddings]
    std::vector<double> hidden;  // tanh activations
    std::vector<double> probs;
  };
  void step(const DocumentContext& doc, std::span<const int> prefix,
            StepState& state) const;
  int context_token(std::span<const int> prefix, int slot) const;

  Vocabulary vocab_;
  ModelConfig config_;
  std::vector<ParamBlock> layout_;
  std::vector<double> params_;
};

// Fills dL/dlogits for the prediction at `position` (predicting
// summary.ids[position + 1]). `probs` is the model distribution there.
using LogitGradFn = std::function<void(size_t position, std::span<const double> probs,
                                       std::span<double> dlogits)>;

// Reverse-mode pass for all sequences that share one document. Each
// add_sequence call back-propagates through the decoder; finish() pushes the
// accumulated document-vector gradient through the encoder.
class DocumentBackprop {
 public:
  DocumentBackprop(const ToyLM& model, const DocumentContext& doc, Gradients& grad);

  void add_sequence(const TokenSeq& seq, const LogitGradFn& fn);
  void finish();

 private:
  const ToyLM& model_;
  const DocumentContext& doc_;
  Gradients& grad_;
  std::vector<double> d_doc_;
  bool finished_ = false;
};

enum class EmptyPolicy { kError, kAllowEmpty };

// log p_g(S|D) = sum of per-token log-probabilities.
double sequence_log_prob(const ToyLM& model, const TokenSeq& document,
                         const TokenSeq& summary,
                         EmptyPolicy policy = EmptyPolicy::kError);
double sequence_log_prob(const ToyLM& model, const DocumentContext& doc,
                         const TokenSeq& summary,
                         EmptyPolicy policy = EmptyPolicy::kError);

// Length-normalised log-probability: sequence_log_prob / l_S.
double normalized_log_prob(const ToyLM& model, const TokenSeq& document,
                           const TokenSeq& summary);
double normalized_log_prob(const ToyLM& model, const DocumentContext& doc,
                           const TokenSeq& summary);

// Checkpoint container (structured text, version 1). Round-trips exactly.
void save_checkpoint(const ToyLM& model, const std::filesystem::path& path);
ToyLM load_checkpoint(const std::filesystem::path& path);

}  // namespace llmref::lm

#endif  // LLMREF_LM_MODEL_H_

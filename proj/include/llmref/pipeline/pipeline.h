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

#ifndef LLMREF_PIPELINE_PIPELINE_H_
#define LLMREF_PIPELINE_PIPELINE_H_

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "llmref/corpus/corpus.h"
#include "llmref/eval/evaluators.h"
#include "llmref/llm/client.h"
#include "llmref/lm/model.h"
#include "llmref/pipeline/config.h"

namespace llmref::pipeline {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct HistoryEntry {
  size_t epoch = 0;
  double train_loss = 0.0;
  double val_ce = 0.0;
  double val_ctr = 0.0;

  bool operator==(const HistoryEntry&) const = default;
};

// Epoch with the smallest validation metric; ties go to the earliest epoch.
size_t select_checkpoint(const std::vector<HistoryEntry>& history, Criterion criterion);

struct RunManifest {
  std::string stage;
  std::string status = "completed";  // completed | aborted
  std::string message;
  nlohmann::json config;
  std::string backend;
  std::string model_name;
  nlohmann::json budget;
  std::vector<HistoryEntry> history;
  std::optional<size_t> selected_epoch;
  std::map<std::string, std::string> checkpoints;  // role -> file name in the run dir
  std::map<std::string, std::string> input_hashes;
  nlohmann::json metrics = nlohmann::json::object();

  nlohmann::json to_json() const;
  void save(const std::filesystem::path& path) const;
};

struct StageResult {
  lm::ToyLM model;
  RunManifest manifest;
  // Examples the stage trained and validated on, with references and (for
  // Contrastive) ordered candidates attached.
  std::vector<corpus::Example> train;
  std::vector<corpus::Example> validation;
};

struct RunOptions {
  std::optional<std::filesystem::path> out_dir;  // checkpoint, log, manifest
  llm::LlmClient* client = nullptr;  // needed for references and evaluators
};

// Fresh model whose vocabulary covers the documents and references.
lm::ToyLM initial_model(const std::vector<corpus::Example>& examples,
                        const lm::ModelConfig& config, int min_freq);

// Content digest of a model: vocabulary, configuration and parameters.
std::string model_digest(const lm::ToyLM& model);
std::string dataset_digest(const std::vector<corpus::Example>& examples);

// Fills missing references with the reference LLM's summary.
void attach_references(llm::LlmClient& client, std::vector<corpus::Example>& examples,
                       size_t workers);

// Replaces each example's candidates with an unordered pool decoded from
// `model` (diverse beam search, then similarity-minimising subset).
void attach_candidates(const lm::ToyLM& model, std::vector<corpus::Example>& examples,
                       const decode::BeamConfig& beam, size_t count, size_t workers);

// Orders every candidate pool with the evaluator. Pools with fewer than two
// candidates are dropped. Evaluation failures drop the pool as well; more
// than `skip_budget` of them raise PipelineError. Returns the number skipped.
size_t order_candidates(llm::LlmClient& client, std::vector<corpus::Example>& examples,
                        EvaluatorKind evaluator, size_t skip_budget, size_t workers);

double mean_candidate_length(const lm::Vocabulary& vocab,
                             const std::vector<corpus::Example>& examples);

// Mean Kendall tau-b, over examples with ordered candidates, between the
// model's length-normalised log-probabilities and the evaluator's ordering
// (its scores when present, else ranks).
struct Agreement {
  double mean_tau = 0.0;
  size_t examples = 0;
};
Agreement ranking_agreement(const lm::ToyLM& model,
                            const std::vector<corpus::Example>& examples);

std::vector<std::string> summarize(const lm::ToyLM& model,
                                   const std::vector<corpus::Example>& examples,
                                   int max_len, size_t workers);

StageResult run_stage(const StageConfig& config, const corpus::DatasetSplit& dataset,
                      const lm::ToyLM& model_in, const RunOptions& options);

// System comparison against a baseline (the reference LLM's summaries in the
// usual setup).
struct SystemOutputs {
  std::string name;
  std::map<std::string, std::string> summaries;  // example id -> summary
};

struct EvaluationOptions {
  bool pairwise = true;
  std::optional<bool> gpt_score;  // default: when the backend has log-probs
  eval::PairwiseOptions pairwise_options;
  size_t workers = 4;
};

struct SystemRow {
  std::string name;
  std::optional<eval::Tally> tally;  // absent for the baseline
  std::optional<double> gpt_score;
  double rouge1 = 0.0;  // x100
  double rouge2 = 0.0;  // x100
  double length = 0.0;  // mean whitespace tokens

  bool operator==(const SystemRow&) const = default;
};

struct Report {
  std::string baseline;
  std::vector<SystemRow> rows;  // baseline first

  std::string table() const;
  nlohmann::json to_json() const;
};

Report evaluate_systems(const std::vector<SystemOutputs>& systems,
                        const SystemOutputs& baseline,
                        const std::vector<corpus::Example>& examples,
                        llm::LlmClient* client, const EvaluationOptions& options = {});

}  // namespace llmref::pipeline

#endif  // LLMREF_PIPELINE_PIPELINE_H_

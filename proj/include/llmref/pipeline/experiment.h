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

#ifndef LLMREF_PIPELINE_EXPERIMENT_H_
#define LLMREF_PIPELINE_EXPERIMENT_H_

#include <filesystem>
#include <optional>

#include "json.hpp"
#include "llmref/llm/client.h"
#include "llmref/pipeline/config.h"
#include "llmref/pipeline/pipeline.h"
#include "llmref/pipeline/synthetic.h"

namespace llmref::pipeline {

// The full three-stage recipe on a synthetic corpus: quasi-references from
// the client, WarmStart -> MLE -> Contrastive, then held-out comparison of the
// MLE and Contrastive checkpoints.
struct ExperimentConfig {
  SyntheticConfig corpus;
  corpus::SplitSizes splits{200, 50, 50};
  uint64_t split_seed = 7;
  StageConfig warm_start = StageConfig::defaults(Stage::kWarmStart);
  StageConfig mle = StageConfig::defaults(Stage::kMle);
  StageConfig contrastive = StageConfig::defaults(Stage::kContrastive);
  size_t workers = 4;

  // Settings sized for the bundled mock experiment.
  static ExperimentConfig mock_defaults();
};

nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

struct ExperimentResult {
  RunManifest warm_start;
  RunManifest mle;
  RunManifest contrastive;
  Agreement tau_mle;
  Agreement tau_contrastive;
  double rouge1_mle = 0.0;  // x100, greedy summaries vs quasi-references
  double rouge1_contrastive = 0.0;
  Report report;
  nlohmann::json budget;

  nlohmann::json to_json() const;
};

ExperimentResult run_experiment(const ExperimentConfig& config, llm::LlmClient& client,
                                const std::optional<std::filesystem::path>& out_dir = {});

}  // namespace llmref::pipeline

#endif  // LLMREF_PIPELINE_EXPERIMENT_H_

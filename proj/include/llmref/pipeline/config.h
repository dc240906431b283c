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

#ifndef LLMREF_PIPELINE_CONFIG_H_
#define LLMREF_PIPELINE_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "json.hpp"
#include "llmref/decode/decoding.h"
#include "llmref/lm/model.h"
#include "llmref/loss/losses.h"

namespace llmref::pipeline {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Stage { kWarmStart, kMle, kContrastive };
enum class EvaluatorKind { kGptScore, kGptRankList };
enum class Criterion { kValCe, kValCtr };

std::string_view to_string(Stage stage);
std::string_view to_string(EvaluatorKind kind);
Stage stage_from_string(std::string_view s);
EvaluatorKind evaluator_from_string(std::string_view s);

struct StageConfig {
  Stage stage = Stage::kMle;
  size_t train_size = 0;
  size_t validation_size = 0;
  std::optional<EvaluatorKind> evaluator;  // required for Contrastive
  loss::LossConfig loss;
  bool auto_lambda = true;  // lambda = mean candidate length of the training pool
  decode::BeamConfig decode;
  size_t candidates = 8;
  size_t epochs = 5;
  size_t batch_size = 8;
  double learning_rate = 0.1;
  uint64_t seed = 1;
  size_t skip_budget = 0;    // evaluator failures tolerated before aborting
  size_t workers = 4;        // concurrent decode / evaluator calls
  int summary_max_len = 40;  // greedy decoding length cap for reports
  // Used when a stage starts from scratch.
  lm::ModelConfig model;
  int min_freq = 1;

  // Stage defaults: data sizes, decoding and training settings.
  static StageConfig defaults(Stage stage);
  void validate() const;
};

nlohmann::json to_json(const StageConfig& config);
// Missing keys keep the stage defaults.
StageConfig stage_config_from_json(const nlohmann::json& j);
StageConfig load_stage_config(const std::filesystem::path& path);

}  // namespace llmref::pipeline

#endif  // LLMREF_PIPELINE_CONFIG_H_

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

#include "llmref/pipeline/config.h"

#include <fstream>

namespace llmref::pipeline {

using nlohmann::json;

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::kWarmStart:
      return "WarmStart";
    case Stage::kMle:
      return "MLE";
    case Stage::kContrastive:
      return "Contrastive";
  }
  return "?";
}

std::string_view to_string(EvaluatorKind kind) {
  return kind == EvaluatorKind::kGptScore ? "GPTScore" : "GPTRankList";
}

Stage stage_from_string(std::string_view s) {
  if (s == "WarmStart") return Stage::kWarmStart;
  if (s == "MLE") return Stage::kMle;
  if (s == "Contrastive") return Stage::kContrastive;
  throw ConfigError("unknown stage '" + std::string(s) + "'");
}

EvaluatorKind evaluator_from_string(std::string_view s) {
  if (s == "GPTScore") return EvaluatorKind::kGptScore;
  if (s == "GPTRankList") return EvaluatorKind::kGptRankList;
  throw ConfigError("unknown evaluator '" + std::string(s) + "'");
}

StageConfig StageConfig::defaults(Stage stage) {
  StageConfig c;
  c.stage = stage;
  c.decode.groups = 16;
  c.decode.beams_per_group = 2;
  c.decode.diversity_penalty = 1.0;
  c.decode.max_len = 40;
  switch (stage) {
    case Stage::kWarmStart:
      c.train_size = 10000;
      c.validation_size = 1000;
      break;
    case Stage::kMle:
      c.train_size = 2000;
      c.validation_size = 200;
      break;
    case Stage::kContrastive:
      c.train_size = 500;
      c.validation_size = 100;
      c.evaluator = EvaluatorKind::kGptRankList;
      break;
  }
  return c;
}

void StageConfig::validate() const {
  loss.validate();
  decode.validate();
  if (stage == Stage::kContrastive) {
    if (!evaluator) throw ConfigError("Contrastive stage requires an evaluator");
    if (candidates < 2) throw ConfigError("Contrastive stage needs at least 2 candidates");
    if (evaluator == EvaluatorKind::kGptRankList && candidates > 8) {
      throw ConfigError("list-wise ranking supports at most 8 candidates");
    }
  }
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (summary_max_len < 1) throw ConfigError("summary_max_len must be positive");
}

json to_json(const StageConfig& c) {
  json j;
  j["stage"] = to_string(c.stage);
  j["train_size"] = c.train_size;
  j["validation_size"] = c.validation_size;
  j["evaluator"] = c.evaluator ? json(to_string(*c.evaluator)) : json(nullptr);
  j["loss"] = {{"beta", c.loss.beta},
               {"lambda", c.auto_lambda ? json(nullptr) : json(c.loss.lambda)},
               {"alpha", c.loss.alpha},
               {"normalize", c.loss.normalize}};
  j["decode"] = {{"groups", c.decode.groups},
                 {"beams_per_group", c.decode.beams_per_group},
                 {"diversity_penalty", c.decode.diversity_penalty},
                 {"max_len", c.decode.max_len},
                 {"min_len", c.decode.min_len}};
  j["candidates"] = c.candidates;
  j["epochs"] = c.epochs;
  j["batch_size"] = c.batch_size;
  j["learning_rate"] = c.learning_rate;
  j["seed"] = c.seed;
  j["skip_budget"] = c.skip_budget;
  j["workers"] = c.workers;
  j["summary_max_len"] = c.summary_max_len;
  j["model"] = {{"embed_dim", c.model.embed_dim},
                {"context", c.model.context},
                {"hidden", c.model.hidden},
                {"seed", c.model.seed},
                {"init_scale", c.model.init_scale}};
  j["min_freq"] = c.min_freq;
  return j;
}

namespace {

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace

StageConfig stage_config_from_json(const json& j) {
  try {
    if (!j.is_object() || !j.contains("stage")) throw ConfigError("config needs a 'stage'");
    StageConfig c = StageConfig::defaults(stage_from_string(j.at("stage").get<std::string>()));
    read(j, "train_size", c.train_size);
    read(j, "validation_size", c.validation_size);
    if (j.contains("evaluator")) {
      if (j.at("evaluator").is_null()) {
        c.evaluator.reset();
      } else {
        c.evaluator = evaluator_from_string(j.at("evaluator").get<std::string>());
      }
    }
    if (j.contains("loss")) {
      const json& l = j.at("loss");
      read(l, "beta", c.loss.beta);
      read(l, "alpha", c.loss.alpha);
      read(l, "normalize", c.loss.normalize);
      if (l.contains("lambda") && !l.at("lambda").is_null()) {
        c.loss.lambda = l.at("lambda").get<double>();
        c.auto_lambda = false;
      }
    }
    if (j.contains("decode")) {
      const json& d = j.at("decode");
      read(d, "groups", c.decode.groups);
      read(d, "beams_per_group", c.decode.beams_per_group);
      read(d, "diversity_penalty", c.decode.diversity_penalty);
      read(d, "max_len", c.decode.max_len);
      read(d, "min_len", c.decode.min_len);
    }
    read(j, "candidates", c.candidates);
    read(j, "epochs", c.epochs);
    read(j, "batch_size", c.batch_size);
    read(j, "learning_rate", c.learning_rate);
    read(j, "seed", c.seed);
    read(j, "skip_budget", c.skip_budget);
    read(j, "workers", c.workers);
    read(j, "summary_max_len", c.summary_max_len);
    if (j.contains("model")) {
      const json& m = j.at("model");
      read(m, "embed_dim", c.model.embed_dim);
      read(m, "context", c.model.context);
      read(m, "hidden", c.model.hidden);
      read(m, "seed", c.model.seed);
      read(m, "init_scale", c.model.init_scale);
    }
    read(j, "min_freq", c.min_freq);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

StageConfig load_stage_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return stage_config_from_json(j);
}

}  // namespace llmref::pipeline

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

#include "llmref/pipeline/experiment.h"

#include <fstream>

#include "llmref/util/log.h"

namespace llmref::pipeline {

using nlohmann::json;

ExperimentConfig ExperimentConfig::mock_defaults() {
  ExperimentConfig c;
  c.corpus.documents = 300;
  c.corpus.seed = 1;
  c.splits = {200, 50, 50};

  c.warm_start.train_size = 200;
  c.warm_start.validation_size = 50;
  c.warm_start.epochs = 10;
  c.warm_start.learning_rate = 0.2;

  c.mle.train_size = 200;
  c.mle.validation_size = 50;
  c.mle.epochs = 10;
  c.mle.learning_rate = 0.1;

  c.contrastive.train_size = 200;
  c.contrastive.validation_size = 50;
  c.contrastive.epochs = 10;
  c.contrastive.learning_rate = 0.1;
  c.contrastive.evaluator = EvaluatorKind::kGptRankList;
  return c;
}

json to_json(const ExperimentConfig& c) {
  return {{"corpus",
           {{"documents", c.corpus.documents},
            {"seed", c.corpus.seed},
            {"min_filler_sentences", c.corpus.min_filler_sentences},
            {"max_filler_sentences", c.corpus.max_filler_sentences}}},
          {"splits",
           {{"train", c.splits.train},
            {"validation", c.splits.validation},
            {"test", c.splits.test}}},
          {"split_seed", c.split_seed},
          {"warm_start", to_json(c.warm_start)},
          {"mle", to_json(c.mle)},
          {"contrastive", to_json(c.contrastive)},
          {"workers", c.workers}};
}

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig c = ExperimentConfig::mock_defaults();
  try {
    if (j.contains("corpus")) {
      const json& k = j.at("corpus");
      c.corpus.documents = k.value("documents", c.corpus.documents);
      c.corpus.seed = k.value("seed", c.corpus.seed);
      c.corpus.min_filler_sentences = k.value("min_filler_sentences", c.corpus.min_filler_sentences);
      c.corpus.max_filler_sentences = k.value("max_filler_sentences", c.corpus.max_filler_sentences);
    }
    if (j.contains("splits")) {
      const json& s = j.at("splits");
      c.splits.train = s.value("train", c.splits.train);
      c.splits.validation = s.value("validation", c.splits.validation);
      c.splits.test = s.value("test", c.splits.test);
    }
    c.split_seed = j.value("split_seed", c.split_seed);
    c.workers = j.value("workers", c.workers);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad experiment config: ") + e.what());
  }
  // Stage sections override the mock defaults key by key.
  auto stage = [&](const char* key, StageConfig& out) {
    if (!j.contains(key)) return;
    json merged = to_json(out);
    merged.merge_patch(j.at(key));
    merged["stage"] = to_string(out.stage);
    out = stage_config_from_json(merged);
  };
  stage("warm_start", c.warm_start);
  stage("mle", c.mle);
  stage("contrastive", c.contrastive);
  return c;
}

json ExperimentResult::to_json() const {
  return {{"manifests",
           {{"warm_start", warm_start.to_json()},
            {"mle", mle.to_json()},
            {"contrastive", contrastive.to_json()}}},
          {"held_out",
           {{"tau_mle", tau_mle.mean_tau},
            {"tau_contrastive", tau_contrastive.mean_tau},
            {"tau_examples", tau_mle.examples},
            {"rouge1_mle", rouge1_mle},
            {"rouge1_contrastive", rouge1_contrastive}}},
          {"report", report.to_json()},
          {"budget", budget}};
}

namespace {

std::map<std::string, std::string> by_id(const std::vector<corpus::Example>& examples,
                                         const std::vector<std::string>& summaries) {
  std::map<std::string, std::string> out;
  for (size_t i = 0; i < examples.size(); ++i) out[examples[i].id] = summaries[i];
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, llm::LlmClient& client,
                                const std::optional<std::filesystem::path>& out_dir) {
  if (out_dir) std::filesystem::create_directories(*out_dir);
  const auto examples = generate_corpus(config.corpus);
  corpus::DatasetSplit split = corpus::make_splits(examples, config.splits, config.split_seed);

  attach_references(client, split.train, config.workers);
  attach_references(client, split.validation, config.workers);
  attach_references(client, split.test, config.workers);

  std::vector<corpus::Example> vocab_source = split.train;
  vocab_source.insert(vocab_source.end(), split.validation.begin(), split.validation.end());
  const lm::ToyLM initial =
      initial_model(vocab_source, config.warm_start.model, config.warm_start.min_freq);

  RunOptions options{out_dir, &client};
  ExperimentResult r;
  auto abort_if = [](const RunManifest& m) {
    if (m.status != "completed") throw PipelineError(m.stage + " stage " + m.status + ": " + m.message);
  };
  StageResult warm = run_stage(config.warm_start, split, initial, options);
  r.warm_start = warm.manifest;
  abort_if(r.warm_start);
  StageResult mle = run_stage(config.mle, split, warm.model, options);
  r.mle = mle.manifest;
  abort_if(r.mle);
  StageResult ctr = run_stage(config.contrastive, split, mle.model, options);
  r.contrastive = ctr.manifest;
  abort_if(r.contrastive);

  // Held-out pool from the MLE checkpoint, ordered once by the evaluator.
  const StageConfig& cc = config.contrastive;
  std::vector<corpus::Example> held_out = split.test;
  attach_candidates(mle.model, held_out, cc.decode, cc.candidates, config.workers);
  order_candidates(client, held_out, *cc.evaluator, held_out.size(), config.workers);
  r.tau_mle = ranking_agreement(mle.model, held_out);
  r.tau_contrastive = ranking_agreement(ctr.model, held_out);

  const auto mle_summaries = summarize(mle.model, split.test, cc.summary_max_len, config.workers);
  const auto ctr_summaries = summarize(ctr.model, split.test, cc.summary_max_len, config.workers);
  std::vector<std::string> refs;
  for (const auto& e : split.test) refs.push_back(*e.reference);

  SystemOutputs baseline{client.model_name(), by_id(split.test, refs)};
  SystemOutputs mle_sys{"MLE", by_id(split.test, mle_summaries)};
  SystemOutputs ctr_sys{"Contrastive", by_id(split.test, ctr_summaries)};
  EvaluationOptions eval_options;
  eval_options.workers = config.workers;
  r.report = evaluate_systems({mle_sys, ctr_sys}, baseline, split.test, &client, eval_options);
  r.rouge1_mle = r.report.rows[1].rouge1;
  r.rouge1_contrastive = r.report.rows[2].rouge1;
  r.budget = client.budget().report();

  if (out_dir) {
    std::ofstream(*out_dir / "experiment.json") << r.to_json().dump(2) << "\n";
    std::ofstream(*out_dir / "report.txt") << r.report.table();
    corpus::save_candidates(*out_dir / "heldout.candidates.jsonl", [&] {
      std::vector<corpus::Example> with_pool;
      for (const auto& e : held_out) {
        if (e.candidates) with_pool.push_back(e);
      }
      return with_pool;
    }());
  }
  return r;
}

}  // namespace llmref::pipeline

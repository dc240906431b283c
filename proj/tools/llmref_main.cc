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

// Command-line front end: quasi-reference generation, stage training,
// candidate generation and ranking, system evaluation and spend reports.

#include <csignal>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "llmref/corpus/corpus.h"
#include "llmref/decode/decoding.h"
#include "llmref/eval/evaluators.h"
#include "llmref/llm/budget.h"
#include "llmref/llm/cache.h"
#include "llmref/llm/client.h"
#include "llmref/llm/http_backend.h"
#include "llmref/llm/mock_backend.h"
#include "llmref/llm/mock_server.h"
#include "llmref/lm/model.h"
#include "llmref/pipeline/config.h"
#include "llmref/pipeline/experiment.h"
#include "llmref/pipeline/pipeline.h"
#include "llmref/pipeline/synthetic.h"
#include "llmref/util/log.h"
#include "llmref/util/parallel.h"

namespace {

using namespace llmref;
using nlohmann::json;

struct BackendFlags {
  std::string backend = "mock";
  std::string base_url = "https://api.openai.com/v1";
  std::string api_key_env = "OPENAI_API_KEY";
  std::string model = "mock-reference";
  bool no_auth = false;
  bool chat = false;
  bool no_logprobs = false;
  std::string cache_dir;
  std::string rates_file;
  double budget_cap = -1;
  size_t max_in_flight = 4;
  std::string budget_out;

  void add_to(CLI::App* app) {
    app->add_option("--backend", backend, "mock or http")->check(CLI::IsMember({"mock", "http"}));
    app->add_option("--base-url", base_url, "OpenAI-compatible endpoint root");
    app->add_option("--api-key-env", api_key_env, "environment variable holding the API key");
    app->add_flag("--no-auth", no_auth, "send no Authorization header (local servers)");
    app->add_option("--model", model, "model name sent to the backend");
    app->add_flag("--chat", chat, "send generation prompts as chat messages");
    app->add_flag("--no-logprobs", no_logprobs, "backend cannot return log-probabilities");
    app->add_option("--cache", cache_dir, "response cache directory (memory only if unset)");
    app->add_option("--rates", rates_file, "JSON price table per 1K tokens");
    app->add_option("--budget-cap", budget_cap, "stop before billing more than this");
    app->add_option("--max-in-flight", max_in_flight, "concurrent backend requests");
    app->add_option("--budget-out", budget_out, "write the spend report here");
  }

  std::unique_ptr<llm::LlmClient> make_client() const {
    std::shared_ptr<llm::Backend> b;
    if (backend == "mock") {
      llm::MockOptions o;
      o.supports_logprobs = !no_logprobs;
      b = std::make_shared<llm::MockBackend>(o);
    } else {
      llm::HttpOptions o;
      o.base_url = base_url;
      o.api_key_env = api_key_env;
      o.require_api_key = !no_auth;
      o.supports_logprobs = !no_logprobs;
      b = std::make_shared<llm::HttpBackend>(o);
    }
    auto cache = cache_dir.empty() ? std::make_shared<llm::ResponseCache>()
                                   : std::make_shared<llm::ResponseCache>(cache_dir);
    llm::ClientOptions options;
    options.model_name = model;
    options.chat = chat;
    options.max_in_flight = max_in_flight;
    if (budget_cap >= 0) options.budget_cap = budget_cap;
    if (!rates_file.empty()) options.rates = llm::RateTable::from_json(read_json(rates_file));
    return std::make_unique<llm::LlmClient>(b, cache, options);
  }

  void report(const llm::LlmClient& client) const {
    const json r = client.budget().report();
    if (budget_out.empty()) {
      std::cerr << r.dump(2) << "\n";
    } else {
      std::ofstream(budget_out) << r.dump(2) << "\n";
    }
  }

  static json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return json::parse(in);
  }
};

std::vector<corpus::Example> load(const std::string& path) { return corpus::load_dataset(path); }

void write_summaries(const std::string& path, const std::vector<corpus::Example>& examples,
                     const std::vector<std::string>& summaries) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (size_t i = 0; i < examples.size(); ++i) {
    out << json{{"id", examples[i].id}, {"summary", summaries[i]}}.dump() << "\n";
  }
}

pipeline::SystemOutputs read_summaries(const std::string& arg) {
  const size_t eq = arg.find('=');
  if (eq == std::string::npos) throw std::runtime_error("expected NAME=FILE, got " + arg);
  pipeline::SystemOutputs s;
  s.name = arg.substr(0, eq);
  std::ifstream in(arg.substr(eq + 1));
  if (!in) throw std::runtime_error("cannot open " + arg.substr(eq + 1));
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const json j = json::parse(line);
    s.summaries[j.at("id").get<std::string>()] = j.at("summary").get<std::string>();
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"llmref: train small summarizers with an LLM as the reference"};
  app.require_subcommand(1);
  std::string verbosity = "warn";
  app.add_option("--log", verbosity, "debug, info, warn or error")
      ->check(CLI::IsMember({"debug", "info", "warn", "error"}));

  // synth
  auto* synth = app.add_subcommand("synth", "write a seeded synthetic corpus");
  pipeline::SyntheticConfig synth_cfg;
  std::string synth_out;
  synth->add_option("--documents", synth_cfg.documents, "number of documents");
  synth->add_option("--seed", synth_cfg.seed, "generator seed");
  synth->add_option("--out", synth_out, "output JSONL file")->required();

  // split
  auto* split = app.add_subcommand("split", "split a dataset into train/validation/test files");
  std::string split_in, split_prefix;
  corpus::SplitSizes sizes;
  uint64_t split_seed = 7;
  split->add_option("--data", split_in, "input JSONL dataset")->required();
  split->add_option("--train", sizes.train, "train examples")->required();
  split->add_option("--validation", sizes.validation, "validation examples")->required();
  split->add_option("--test", sizes.test, "test examples")->required();
  split->add_option("--seed", split_seed, "shuffle seed");
  split->add_option("--out-prefix", split_prefix, "writes PREFIX.{train,validation,test}.jsonl")->required();

  // gen-refs
  auto* gen_refs = app.add_subcommand("gen-refs", "fill references with LLM summaries");
  BackendFlags refs_flags;
  refs_flags.add_to(gen_refs);
  std::string refs_in, refs_out;
  size_t workers = 4;
  gen_refs->add_option("--data", refs_in, "input JSONL dataset")->required();
  gen_refs->add_option("--out", refs_out, "output JSONL dataset")->required();
  gen_refs->add_option("--workers", workers, "concurrent requests");

  // train
  auto* train = app.add_subcommand("train", "run one training stage from a config file");
  BackendFlags train_flags;
  train_flags.add_to(train);
  std::string train_config, train_data, val_data, model_in, train_out;
  train->add_option("--config", train_config, "stage config (JSON)")->required();
  train->add_option("--train", train_data, "training dataset")->required();
  train->add_option("--validation", val_data, "validation dataset");
  train->add_option("--model-in", model_in, "starting checkpoint (fresh model if unset)");
  train->add_option("--out", train_out, "run directory")->required();

  // summarize
  auto* summarize = app.add_subcommand("summarize", "greedy summaries from a checkpoint");
  std::string sum_model, sum_data, sum_out;
  int sum_max_len = 40;
  summarize->add_option("--model", sum_model, "checkpoint")->required();
  summarize->add_option("--data", sum_data, "input JSONL dataset")->required();
  summarize->add_option("--out", sum_out, "output summaries JSONL")->required();
  summarize->add_option("--max-len", sum_max_len, "maximum summary tokens");

  // gen-candidates
  auto* gen_cands = app.add_subcommand("gen-candidates", "diverse beam search candidate pools");
  std::string cand_model, cand_data, cand_out;
  decode::BeamConfig beam;
  beam.groups = 16;
  beam.beams_per_group = 2;
  size_t cand_count = 8;
  bool first_of_group = false;
  gen_cands->add_option("--model", cand_model, "checkpoint")->required();
  gen_cands->add_option("--data", cand_data, "input JSONL dataset")->required();
  gen_cands->add_option("--out", cand_out, "output candidates JSONL")->required();
  gen_cands->add_option("--groups", beam.groups, "beam groups");
  gen_cands->add_option("--beams", beam.beams_per_group, "beams per group");
  gen_cands->add_option("--diversity", beam.diversity_penalty, "diversity penalty");
  gen_cands->add_option("--max-len", beam.max_len, "maximum candidate tokens");
  gen_cands->add_option("--min-len", beam.min_len, "minimum tokens before EOS");
  gen_cands->add_option("--count", cand_count, "candidates kept per document");
  gen_cands->add_flag("--first-of-group", first_of_group,
                      "keep each group's best beam instead of a diverse subset");

  // rank-candidates
  auto* rank = app.add_subcommand("rank-candidates", "order candidate pools with an evaluator");
  BackendFlags rank_flags;
  rank_flags.add_to(rank);
  std::string rank_in, rank_out, rank_eval = "GPTRankList";
  size_t skip_budget = 0;
  rank->add_option("--data", rank_in, "candidates JSONL")->required();
  rank->add_option("--out", rank_out, "ordered candidates JSONL")->required();
  rank->add_option("--evaluator", rank_eval, "ordering evaluator")->check(CLI::IsMember({"GPTScore", "GPTRankList"}));
  rank->add_option("--skip-budget", skip_budget, "failed pools tolerated");
  rank->add_option("--workers", workers, "concurrent requests");

  // eval
  auto* evaluate = app.add_subcommand("eval", "compare systems against a baseline");
  BackendFlags eval_flags;
  eval_flags.add_to(evaluate);
  std::string eval_data, eval_baseline, eval_report;
  std::vector<std::string> eval_systems;
  bool no_pairwise = false, debias = false, no_gs = false;
  evaluate->add_option("--data", eval_data, "examples with references")->required();
  evaluate->add_option("--baseline", eval_baseline, "NAME=summaries.jsonl")->required();
  evaluate->add_option("--system", eval_systems, "NAME=summaries.jsonl (repeatable)");
  evaluate->add_option("--report", eval_report, "write the report as JSON");
  evaluate->add_flag("--no-pairwise", no_pairwise, "skip the pairwise comparison");
  evaluate->add_flag("--debias", debias, "ask both orders; disagreement is a tie");
  evaluate->add_flag("--no-gptscore", no_gs, "skip the GPTScore column");
  evaluate->add_option("--workers", workers, "concurrent requests");

  // budget
  auto* budget = app.add_subcommand("budget", "spend report for a cache directory");
  std::string budget_cache, budget_rates;
  budget->add_option("--cache", budget_cache, "response cache directory")->required();
  budget->add_option("--rates", budget_rates, "JSON price table per 1K tokens");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "full three-stage run on a synthetic corpus");
  BackendFlags exp_flags;
  exp_flags.add_to(experiment);
  std::string exp_config, exp_out;
  experiment->add_option("--config", exp_config, "experiment config (mock defaults if unset)");
  experiment->add_option("--out", exp_out, "run directory")->required();

  // serve-mock
  auto* serve = app.add_subcommand("serve-mock", "serve the mock backend over HTTP");
  int serve_port = 8089;
  serve->add_option("--port", serve_port, "port (ephemeral if 0)");

  CLI11_PARSE(app, argc, argv);
  log::set_level(verbosity == "debug"  ? log::Level::kDebug
                 : verbosity == "info" ? log::Level::kInfo
                 : verbosity == "warn" ? log::Level::kWarn
                                       : log::Level::kError);

  try {
    if (*synth) {
      corpus::save_dataset(synth_out, pipeline::generate_corpus(synth_cfg));
    } else if (*split) {
      const auto s = corpus::make_splits(load(split_in), sizes, split_seed);
      corpus::save_dataset(split_prefix + ".train.jsonl", s.train);
      corpus::save_dataset(split_prefix + ".validation.jsonl", s.validation);
      corpus::save_dataset(split_prefix + ".test.jsonl", s.test);
    } else if (*gen_refs) {
      auto client = refs_flags.make_client();
      auto examples = load(refs_in);
      pipeline::attach_references(*client, examples, workers);
      corpus::save_dataset(refs_out, examples);
      refs_flags.report(*client);
    } else if (*train) {
      const auto config = pipeline::load_stage_config(train_config);
      corpus::DatasetSplit data;
      data.train = load(train_data);
      if (!val_data.empty()) data.validation = load(val_data);
      std::unique_ptr<llm::LlmClient> client = train_flags.make_client();
      pipeline::RunOptions options{std::filesystem::path(train_out), client.get()};
      const lm::ToyLM start = [&] {
        if (!model_in.empty()) return lm::load_checkpoint(model_in);
        // A fresh model's vocabulary must cover the references, so attach them first.
        pipeline::attach_references(*client, data.train, config.workers);
        pipeline::attach_references(*client, data.validation, config.workers);
        auto all = data.train;
        all.insert(all.end(), data.validation.begin(), data.validation.end());
        return pipeline::initial_model(all, config.model, config.min_freq);
      }();
      const auto result = pipeline::run_stage(config, data, start, options);
      std::cout << result.manifest.to_json().dump(2) << "\n";
      train_flags.report(*client);
      if (result.manifest.status != "completed") return 3;
    } else if (*summarize) {
      const auto model = lm::load_checkpoint(sum_model);
      const auto examples = load(sum_data);
      write_summaries(sum_out, examples, pipeline::summarize(model, examples, sum_max_len, 1));
    } else if (*gen_cands) {
      const auto model = lm::load_checkpoint(cand_model);
      auto examples = load(cand_data);
      if (first_of_group) {
        for (auto& e : examples) {
          corpus::CandidateSet set;
          set.candidates = decode::generate_candidates(model, model.vocab().encode(e.document),
                                                       beam, decode::PoolSelection::kFirstOfGroup,
                                                       cand_count);
          e.candidates = std::move(set);
        }
      } else {
        pipeline::attach_candidates(model, examples, beam, cand_count, 1);
      }
      corpus::save_candidates(cand_out, examples);
    } else if (*rank) {
      auto client = rank_flags.make_client();
      auto examples = load(rank_in);
      const size_t skipped = pipeline::order_candidates(
          *client, examples, pipeline::evaluator_from_string(rank_eval), skip_budget, workers);
      std::vector<corpus::Example> kept;
      for (auto& e : examples) {
        if (e.candidates) kept.push_back(std::move(e));
      }
      corpus::save_candidates(rank_out, kept);
      if (skipped) std::cerr << "skipped " << skipped << " examples\n";
      rank_flags.report(*client);
    } else if (*evaluate) {
      auto client = eval_flags.make_client();
      const auto examples = load(eval_data);
      std::vector<pipeline::SystemOutputs> systems;
      for (const auto& s : eval_systems) systems.push_back(read_summaries(s));
      pipeline::EvaluationOptions options;
      options.pairwise = !no_pairwise;
      options.pairwise_options.debias = debias;
      if (no_gs) options.gpt_score = false;
      options.workers = workers;
      const auto report = pipeline::evaluate_systems(systems, read_summaries(eval_baseline),
                                                     examples, client.get(), options);
      std::cout << report.table();
      if (!eval_report.empty()) std::ofstream(eval_report) << report.to_json().dump(2) << "\n";
      eval_flags.report(*client);
    } else if (*budget) {
      llm::RateTable rates;
      if (!budget_rates.empty()) rates = llm::RateTable::from_json(BackendFlags::read_json(budget_rates));
      llm::Budget b(rates);
      for (const auto& entry : llm::ResponseCache::read_index(budget_cache)) {
        b.record(entry.model, entry.usage, true);
      }
      std::cout << b.report().dump(2) << "\n";
    } else if (*experiment) {
      auto client = exp_flags.make_client();
      const auto config = exp_config.empty()
                              ? pipeline::ExperimentConfig::mock_defaults()
                              : pipeline::experiment_config_from_json(BackendFlags::read_json(exp_config));
      const auto result = pipeline::run_experiment(config, *client, std::filesystem::path(exp_out));
      std::cout << result.report.table() << result.to_json()["held_out"].dump(2) << "\n";
      exp_flags.report(*client);
    } else if (*serve) {
      // Block the signals before the server thread starts so it inherits the mask.
      sigset_t set;
      sigemptyset(&set);
      sigaddset(&set, SIGINT);
      sigaddset(&set, SIGTERM);
      pthread_sigmask(SIG_BLOCK, &set, nullptr);
      auto backend = std::make_shared<llm::MockBackend>();
      llm::MockServer server(backend);
      const int port = server.start(serve_port);
      std::cout << "mock backend listening on http://127.0.0.1:" << port << "/v1" << std::endl;
      int sig = 0;
      sigwait(&set, &sig);
      server.stop();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

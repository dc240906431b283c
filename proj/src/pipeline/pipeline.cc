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

#include "llmref/pipeline/pipeline.h"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <numeric>

#include "llmref/decode/decoding.h"
#include "llmref/eval/rouge.h"
#include "llmref/llm/types.h"
#include "llmref/loss/losses.h"
#include "llmref/util/hash.h"
#include "llmref/util/log.h"
#include "llmref/util/parallel.h"
#include "llmref/util/rng.h"
#include "llmref/util/text.h"

namespace llmref::pipeline {

using nlohmann::json;
using corpus::Example;

size_t select_checkpoint(const std::vector<HistoryEntry>& history, Criterion criterion) {
  if (history.empty()) throw PipelineError("select_checkpoint: empty history");
  auto metric = [criterion](const HistoryEntry& h) {
    return criterion == Criterion::kValCe ? h.val_ce : h.val_ctr;
  };
  size_t best = 0;
  for (size_t i = 1; i < history.size(); ++i) {
    if (metric(history[i]) < metric(history[best])) best = i;
  }
  return history[best].epoch;
}

json RunManifest::to_json() const {
  json hist = json::array();
  for (const auto& h : history) {
    hist.push_back({{"epoch", h.epoch},
                    {"train_loss", h.train_loss},
                    {"val_ce", h.val_ce},
                    {"val_ctr", h.val_ctr}});
  }
  return {{"stage", stage},
          {"status", status},
          {"message", message},
          {"config", config},
          {"backend", backend},
          {"model_name", model_name},
          {"budget", budget},
          {"history", hist},
          {"selected_epoch", selected_epoch ? json(*selected_epoch) : json(nullptr)},
          {"checkpoints", checkpoints},
          {"input_hashes", input_hashes},
          {"metrics", metrics}};
}

void RunManifest::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw PipelineError("cannot write manifest " + path.string());
  out << to_json().dump(2) << "\n";
}

lm::ToyLM initial_model(const std::vector<Example>& examples, const lm::ModelConfig& config,
                        int min_freq) {
  std::vector<std::string> texts;
  for (const auto& e : examples) {
    texts.push_back(e.document);
    if (e.reference) texts.push_back(*e.reference);
  }
  return lm::ToyLM(lm::build_vocab(texts, min_freq), config);
}

std::string model_digest(const lm::ToyLM& model) {
  std::string buf;
  for (const auto& t : model.vocab().tokens()) {
    buf += t;
    buf.push_back('\0');
  }
  const auto& c = model.config();
  buf += std::to_string(c.embed_dim) + "," + std::to_string(c.context) + "," +
         std::to_string(c.hidden) + ";";
  const auto params = model.parameters();
  buf.append(reinterpret_cast<const char*>(params.data()), params.size_bytes());
  return sha256_hex(buf);
}

std::string dataset_digest(const std::vector<Example>& examples) {
  std::string buf;
  for (const auto& e : examples) {
    buf += corpus::to_json_line(e);
    buf.push_back('\n');
  }
  return sha256_hex(buf);
}

void attach_references(llm::LlmClient& client, std::vector<Example>& examples,
                       size_t workers) {
  parallel::for_each_index(examples.size(), workers, [&](size_t i) {
    if (!examples[i].reference) {
      examples[i].reference = llm::generate_quasi_reference(client, examples[i].document);
    }
  });
}

void attach_candidates(const lm::ToyLM& model, std::vector<Example>& examples,
                       const decode::BeamConfig& beam, size_t count, size_t workers) {
  parallel::for_each_index(examples.size(), workers, [&](size_t i) {
    corpus::CandidateSet set;
    set.candidates = decode::generate_candidates(
        model, model.vocab().encode(examples[i].document), beam,
        decode::PoolSelection::kDiverseSubset, count);
    examples[i].candidates = std::move(set);
  });
}

size_t order_candidates(llm::LlmClient& client, std::vector<Example>& examples,
                        EvaluatorKind evaluator, size_t skip_budget, size_t workers) {
  std::mutex mu;
  size_t skipped = 0;
  parallel::for_each_index(examples.size(), workers, [&](size_t i) {
    Example& e = examples[i];
    if (!e.candidates || e.candidates->candidates.size() < 2) {
      e.candidates.reset();
      return;
    }
    try {
      const auto& cands = e.candidates->candidates;
      e.candidates = evaluator == EvaluatorKind::kGptScore
                         ? eval::order_by_gpt_score(client, e.document, cands)
                         : eval::order_by_gpt_rank(client, e.document, cands);
    } catch (const llm::LlmError& err) {
      if (err.kind() == llm::LlmError::Kind::kBudgetExceeded) throw;
      std::lock_guard lock(mu);
      log::warn("skipping " + e.id + ": " + err.what());
      e.candidates.reset();
      if (++skipped > skip_budget) throw PipelineError("evaluator failures exceed skip budget");
    } catch (const eval::EvaluationError& err) {
      std::lock_guard lock(mu);
      log::warn("skipping " + e.id + ": " + err.what());
      e.candidates.reset();
      if (++skipped > skip_budget) throw PipelineError("evaluator failures exceed skip budget");
    }
  });
  return skipped;
}

double mean_candidate_length(const lm::Vocabulary& vocab, const std::vector<Example>& examples) {
  double total = 0;
  size_t count = 0;
  for (const auto& e : examples) {
    if (!e.candidates) continue;
    for (const auto& c : e.candidates->candidates) {
      total += static_cast<double>(lm::with_eos(vocab.encode(c)).length());
      ++count;
    }
  }
  return count == 0 ? 1.0 : total / static_cast<double>(count);
}

Agreement ranking_agreement(const lm::ToyLM& model, const std::vector<Example>& examples) {
  Agreement a;
  double sum = 0;
  for (const auto& e : examples) {
    if (!e.candidates || !e.candidates->order) continue;
    const auto& set = *e.candidates;
    const size_t n = set.candidates.size();
    const auto ctx = model.encode_document(model.vocab().encode(e.document));
    std::vector<double> x(n), y(n);
    for (size_t i = 0; i < n; ++i) {
      x[i] = lm::normalized_log_prob(model, ctx,
                                     lm::with_eos(model.vocab().encode(set.candidates[i])));
    }
    if (set.scores) {
      y = *set.scores;
    } else {
      for (size_t r = 0; r < n; ++r) y[(*set.order)[r] - 1] = static_cast<double>(n - r);
    }
    if (const auto tau = eval::kendall_tau(x, y)) {
      sum += *tau;
      ++a.examples;
    }
  }
  if (a.examples > 0) a.mean_tau = sum / static_cast<double>(a.examples);
  return a;
}

std::vector<std::string> summarize(const lm::ToyLM& model, const std::vector<Example>& examples,
                                   int max_len, size_t workers) {
  return parallel::map<std::string>(examples.size(), workers, [&](size_t i) {
    return model.vocab().decode(
        decode::greedy_decode(model, model.vocab().encode(examples[i].document), max_len));
  });
}

namespace {

std::string stage_file(Stage stage, std::string_view suffix) {
  return text::to_lower(to_string(stage)) + std::string(suffix);
}

struct TrainItem {
  lm::TokenSeq document;
  loss::Objective objective;
};

std::vector<TrainItem> build_items(const lm::ToyLM& model, const std::vector<Example>& examples,
                                   const loss::LossConfig& config, bool contrastive) {
  const auto& vocab = model.vocab();
  std::vector<TrainItem> items;
  for (const auto& e : examples) {
    TrainItem item;
    item.document = vocab.encode(e.document);
    item.objective.target = lm::with_eos(vocab.encode(*e.reference));
    item.objective.config = config;
    if (contrastive && e.candidates && e.candidates->order) {
      item.objective.kind = loss::Objective::Kind::kMultiTask;
      item.objective.ranked = loss::ranked_sequences(vocab, *e.candidates);
    }
    items.push_back(std::move(item));
  }
  return items;
}

HistoryEntry validate_epoch(const lm::ToyLM& model, const std::vector<TrainItem>& items,
                            size_t epoch, double train_loss) {
  HistoryEntry h{epoch, train_loss, 0.0, 0.0};
  size_t ctr_count = 0;
  for (const auto& item : items) {
    const auto ctx = model.encode_document(item.document);
    h.val_ce += loss::label_smoothed_ce(model, ctx, item.objective.target,
                                        item.objective.config.beta);
    if (item.objective.ranked.size() >= 2) {
      h.val_ctr += loss::contrastive_loss(model, ctx, item.objective.ranked,
                                          item.objective.config.lambda,
                                          item.objective.config.normalize);
      ++ctr_count;
    }
  }
  if (!items.empty()) h.val_ce /= static_cast<double>(items.size());
  if (ctr_count > 0) h.val_ctr /= static_cast<double>(ctr_count);
  return h;
}

}  // namespace

StageResult run_stage(const StageConfig& config, const corpus::DatasetSplit& dataset,
                      const lm::ToyLM& model_in, const RunOptions& options) {
  config.validate();
  StageResult result{model_in, {}, {}, {}};
  RunManifest& m = result.manifest;
  m.stage = to_string(config.stage);
  m.config = to_json(config);
  m.input_hashes["model_in"] = model_digest(model_in);
  llm::LlmClient* client = options.client;
  if (client) {
    m.backend = client->backend().id();
    m.model_name = client->model_name();
  }
  auto finish = [&]() -> StageResult {
    if (client) m.budget = client->budget().report();
    if (options.out_dir) {
      std::filesystem::create_directories(*options.out_dir);
      m.save(*options.out_dir / stage_file(config.stage, ".manifest.json"));
    }
    return std::move(result);
  };

  if (config.epochs == 0) {
    m.metrics["steps"] = 0;
    return finish();
  }
  if (config.train_size == 0) throw PipelineError("training set size is zero");
  if (dataset.train.size() < config.train_size ||
      dataset.validation.size() < config.validation_size) {
    throw PipelineError("dataset has " + std::to_string(dataset.train.size()) + "/" +
                        std::to_string(dataset.validation.size()) +
                        " train/validation examples, config needs " +
                        std::to_string(config.train_size) + "/" +
                        std::to_string(config.validation_size));
  }
  auto& train = result.train;
  auto& val = result.validation;
  train.assign(dataset.train.begin(), dataset.train.begin() + config.train_size);
  val.assign(dataset.validation.begin(), dataset.validation.begin() + config.validation_size);
  m.input_hashes["train"] = dataset_digest(train);
  m.input_hashes["validation"] = dataset_digest(val);

  const bool contrastive = config.stage == Stage::kContrastive;
  const bool needs_refs = std::any_of(train.begin(), train.end(),
                                      [](const Example& e) { return !e.reference; }) ||
                          std::any_of(val.begin(), val.end(),
                                      [](const Example& e) { return !e.reference; });
  if ((needs_refs || contrastive) && !client) {
    throw PipelineError(std::string(to_string(config.stage)) +
                        " stage needs an LLM client for references or evaluation");
  }

  loss::LossConfig loss_config = config.loss;
  try {
    if (needs_refs) {
      attach_references(*client, train, config.workers);
      attach_references(*client, val, config.workers);
    }
    if (contrastive) {
      attach_candidates(model_in, train, config.decode, config.candidates, config.workers);
      attach_candidates(model_in, val, config.decode, config.candidates, config.workers);
      size_t skipped = order_candidates(*client, train, *config.evaluator, config.skip_budget,
                                        config.workers);
      skipped += order_candidates(*client, val, *config.evaluator,
                                  config.skip_budget - skipped, config.workers);
      m.metrics["skipped_examples"] = skipped;
      if (config.auto_lambda) loss_config.lambda = mean_candidate_length(model_in.vocab(), train);
      m.metrics["lambda"] = loss_config.lambda;
    }
  } catch (const llm::LlmError& e) {
    if (e.kind() != llm::LlmError::Kind::kBudgetExceeded) throw;
    m.status = "aborted";
    m.message = e.what();
    result.model = model_in;
    log::error(std::string(to_string(config.stage)) + " aborted: " + e.what());
    return finish();
  }

  const auto items = build_items(model_in, train, loss_config, contrastive);
  const auto val_items = build_items(model_in, val, loss_config, contrastive);
  m.metrics["train_examples"] = items.size();
  m.metrics["contrastive_examples"] =
      std::count_if(items.begin(), items.end(),
                    [](const TrainItem& t) { return !t.objective.ranked.empty(); });

  loss::TrainingLog training_log;
  if (options.out_dir) {
    std::filesystem::create_directories(*options.out_dir);
    training_log = loss::TrainingLog(*options.out_dir / stage_file(config.stage, ".train.jsonl"));
    m.checkpoints["training_log"] = stage_file(config.stage, ".train.jsonl");
  }

  const Criterion criterion = contrastive ? Criterion::kValCtr : Criterion::kValCe;
  lm::ToyLM model = model_in;
  lm::ToyLM best = model_in;
  std::optional<double> best_metric;
  Rng rng(config.seed);
  std::vector<size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  size_t step = 0;
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0;
    for (size_t start = 0; start < order.size(); start += config.batch_size) {
      const size_t end = std::min(order.size(), start + config.batch_size);
      lm::Gradients grad = model.zero_gradients();
      loss::LossTerms sum;
      for (size_t k = start; k < end; ++k) {
        const TrainItem& item = items[order[k]];
        const auto ctx = model.encode_document(item.document);
        const auto t = loss::accumulate_gradient(model, ctx, item.objective, grad);
        sum.ce += t.ce;
        sum.ctr += t.ctr;
        sum.total += t.total;
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      grad *= scale;
      loss::sgd_step(model, grad, config.learning_rate);
      epoch_loss += sum.total;
      ++step;
      if (training_log.enabled()) {
        training_log.write({step,
                            epoch,
                            {sum.ce * scale, sum.ctr * scale, sum.total * scale},
                            grad.norm(),
                            loss_config});
      }
    }
    const HistoryEntry h = validate_epoch(model, val_items, epoch,
                                          epoch_loss / static_cast<double>(items.size()));
    m.history.push_back(h);
    const double metric = criterion == Criterion::kValCe ? h.val_ce : h.val_ctr;
    if (!best_metric || metric < *best_metric) {
      best_metric = metric;
      best = model;
    }
    log::info(std::string(to_string(config.stage)) + " epoch " + std::to_string(epoch) +
              ": train " + std::to_string(h.train_loss) + ", val_ce " +
              std::to_string(h.val_ce) + ", val_ctr " + std::to_string(h.val_ctr));
  }

  m.selected_epoch = select_checkpoint(m.history, criterion);
  result.model = std::move(best);
  const HistoryEntry& chosen = m.history[*m.selected_epoch - 1];
  m.metrics["steps"] = step;
  m.metrics["val_ce"] = chosen.val_ce;
  m.metrics["val_ctr"] = chosen.val_ctr;
  m.metrics["criterion"] = criterion == Criterion::kValCe ? "ValCE" : "ValCtr";
  m.input_hashes["model_out"] = model_digest(result.model);

  if (options.out_dir) {
    const auto ckpt = stage_file(config.stage, ".ckpt.json");
    lm::save_checkpoint(result.model, *options.out_dir / ckpt);
    m.checkpoints["selected"] = ckpt;
    if (contrastive) {
      std::vector<Example> with_pool;
      for (const auto& e : train) {
        if (e.candidates) with_pool.push_back(e);
      }
      const auto file = stage_file(config.stage, ".candidates.jsonl");
      corpus::save_candidates(*options.out_dir / file, with_pool);
      m.checkpoints["candidates"] = file;
    }
  }
  return finish();
}

namespace {

double mean(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void check_coverage(const SystemOutputs& system, const std::vector<Example>& examples) {
  for (const auto& e : examples) {
    if (!system.summaries.count(e.id)) {
      throw PipelineError("system '" + system.name + "' has no summary for '" + e.id + "'");
    }
  }
  if (system.summaries.size() != examples.size()) {
    throw PipelineError("system '" + system.name + "' covers ids outside the dataset");
  }
}

}  // namespace

Report evaluate_systems(const std::vector<SystemOutputs>& systems, const SystemOutputs& baseline,
                       const std::vector<Example>& examples, llm::LlmClient* client,
                       const EvaluationOptions& options) {
  check_coverage(baseline, examples);
  for (const auto& s : systems) check_coverage(s, examples);
  for (const auto& e : examples) {
    if (!e.reference) throw PipelineError("example '" + e.id + "' has no reference");
  }
  const bool use_gs = client && options.gpt_score.value_or(client->backend().supports_logprobs());
  if (options.pairwise && !client && !systems.empty()) {
    throw PipelineError("pairwise comparison needs an LLM client");
  }

  auto row_for = [&](const SystemOutputs& s, bool is_baseline) {
    SystemRow row;
    row.name = s.name;
    std::vector<double> r1, r2, len;
    for (const auto& e : examples) {
      const std::string& summary = s.summaries.at(e.id);
      r1.push_back(eval::rouge_f1(summary, *e.reference, 1) * 100.0);
      r2.push_back(eval::rouge_f1(summary, *e.reference, 2) * 100.0);
      len.push_back(static_cast<double>(text::split_whitespace(summary).size()));
    }
    row.rouge1 = mean(r1);
    row.rouge2 = mean(r2);
    row.length = mean(len);
    if (use_gs) {
      const auto scores = parallel::map<std::optional<double>>(
          examples.size(), options.workers, [&](size_t i) -> std::optional<double> {
            const std::string& summary = s.summaries.at(examples[i].id);
            if (text::split_whitespace(summary).empty()) return std::nullopt;
            return eval::gpt_score(*client, examples[i].document, summary);
          });
      std::vector<double> present;
      for (const auto& v : scores) {
        if (v) present.push_back(*v);
      }
      row.gpt_score = mean(present);
    }
    if (!is_baseline && options.pairwise) {
      const auto decisions = parallel::map<eval::PairDecision>(
          examples.size(), options.workers, [&](size_t i) {
            const std::string& mine = s.summaries.at(examples[i].id);
            const std::string& theirs = baseline.summaries.at(examples[i].id);
            const bool mine_empty = text::trim(mine).empty();
            const bool theirs_empty = text::trim(theirs).empty();
            // An empty summary cannot be judged; it loses to any non-empty one.
            if (mine_empty || theirs_empty) {
              eval::PairDecision d;
              d.outcome = mine_empty && theirs_empty ? eval::PairOutcome::kTie
                          : mine_empty                ? eval::PairOutcome::kSecond
                                                      : eval::PairOutcome::kFirst;
              return d;
            }
            return eval::compare_pairwise(*client, examples[i].document, mine, theirs,
                                          options.pairwise_options);
          });
      row.tally = eval::tally(decisions);
    }
    return row;
  };

  Report report;
  report.baseline = baseline.name;
  report.rows.push_back(row_for(baseline, true));
  for (const auto& s : systems) report.rows.push_back(row_for(s, false));
  return report;
}

std::string Report::table() const {
  const bool gs = std::any_of(rows.begin(), rows.end(),
                              [](const SystemRow& r) { return r.gpt_score.has_value(); });
  size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.name.size());
  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf), "%-*s %6s %6s %7s %7s %6s", static_cast<int>(width), "System",
                "Win", "Lose", "R1", "R2", "Len.");
  out += buf;
  if (gs) out += "       GS";
  out += "\n";
  for (const auto& r : rows) {
    const std::string win = r.tally ? std::to_string(r.tally->wins) : "-";
    const std::string lose = r.tally ? std::to_string(r.tally->losses) : "-";
    std::snprintf(buf, sizeof(buf), "%-*s %6s %6s %7.2f %7.2f %6.1f", static_cast<int>(width),
                  r.name.c_str(), win.c_str(), lose.c_str(), r.rouge1, r.rouge2, r.length);
    out += buf;
    if (gs) {
      if (r.gpt_score) {
        std::snprintf(buf, sizeof(buf), " %8.3f", *r.gpt_score);
        out += buf;
      } else {
        out += "        -";
      }
    }
    out += "\n";
  }
  return out;
}

json Report::to_json() const {
  json j;
  j["baseline"] = baseline;
  j["columns"] = {"Win", "Lose", "R1", "R2", "Len."};
  json rs = json::array();
  for (const auto& r : rows) {
    json row = {{"system", r.name}, {"r1", r.rouge1}, {"r2", r.rouge2}, {"len", r.length}};
    if (r.tally) {
      row["win"] = r.tally->wins;
      row["lose"] = r.tally->losses;
      row["tie"] = r.tally->ties;
    }
    if (r.gpt_score) row["gs"] = *r.gpt_score;
    rs.push_back(row);
  }
  j["rows"] = rs;
  return j;
}

}  // namespace llmref::pipeline

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails. Everything runs offline against the mock
// backend.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "llmref/decode/decoding.h"
#include "llmref/eval/parsing.h"
#include "llmref/eval/rouge.h"
#include "llmref/llm/cache.h"
#include "llmref/llm/client.h"
#include "llmref/llm/http_backend.h"
#include "llmref/llm/mock_backend.h"
#include "llmref/llm/mock_server.h"
#include "llmref/loss/losses.h"
#include "llmref/pipeline/experiment.h"
#include "llmref/util/rng.h"
#include "llmref/util/text.h"
#include "support/oracles.h"

namespace {

using namespace llmref;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// Analytic vs central finite-difference gradients for label-smoothed CE,
// unnormalised and normalised contrastive loss, and the multi-task loss.
Outcome gradient_check() {
  const auto t0 = Clock::now();
  constexpr int kInstances = 20;
  constexpr double kTolerance = 1e-4;
  const char* names[] = {"ce", "ctr-unnormalized", "ctr-normalized", "multi-task"};
  double worst[4] = {0, 0, 0, 0};
  int resampled = 0;
  Outcome out;
  for (int kind = 0; kind < 4; ++kind) {
    int done = 0;
    for (uint64_t seed = 1; done < kInstances; ++seed) {
      Rng rng(1000 * (kind + 1) + seed);
      const int regular = 3 + static_cast<int>(rng.uniform_index(4));
      const auto model = testing::random_model(regular, seed + 17 * kind);
      const int n = model.vocab_size();
      const auto doc = testing::random_seq(rng, n, 2 + static_cast<int>(rng.uniform_index(6)), false);
      loss::Objective obj;
      obj.config.beta = 0.4 * rng.uniform();
      obj.config.lambda = 0.5 + 2.5 * rng.uniform();
      obj.config.alpha = 0.2 + 1.8 * rng.uniform();
      obj.config.normalize = kind != 1;
      obj.target = testing::random_seq(rng, n, static_cast<int>(rng.uniform_index(5)), true);
      const int cands = 2 + static_cast<int>(rng.uniform_index(3));
      for (int c = 0; c < cands; ++c) {
        obj.ranked.push_back(
            testing::random_seq(rng, n, static_cast<int>(rng.uniform_index(5)), true));
      }
      obj.kind = kind == 0   ? loss::Objective::Kind::kLabelSmoothedCe
                 : kind == 3 ? loss::Objective::Kind::kMultiTask
                             : loss::Objective::Kind::kContrastive;
      if (kind != 0) {
        // Finite differences are meaningless across a hinge kink, and an
        // instance with every hinge inactive checks nothing.
        const auto args = testing::hinge_arguments(model, doc, obj.ranked, obj.config.lambda,
                                                   obj.config.normalize);
        const bool near_kink = std::any_of(args.begin(), args.end(),
                                           [](double a) { return std::abs(a) < 1e-4; });
        const bool any_active =
            std::any_of(args.begin(), args.end(), [](double a) { return a > 0; });
        if (near_kink || !any_active) {
          ++resampled;
          continue;
        }
      }
      const auto check = testing::check_gradient(model, doc, obj, 1e-5, 1e-5);
      worst[kind] = std::max(worst[kind], check.max_rel_error);
      if (check.max_rel_error > kTolerance && out.pass) {
        out.pass = false;
        out.detail += std::string(names[kind]) + " seed " + std::to_string(seed) +
                      " coordinate " + std::to_string(check.worst_index) + ": analytic " +
                      fmt("%.9g", check.worst_analytic) + " vs numeric " +
                      fmt("%.9g", check.worst_numeric) + "; ";
      }
      ++done;
    }
  }
  const double secs = seconds_since(t0);
  if (secs >= 60) out.pass = false;
  for (int k = 0; k < 4; ++k) out.detail += std::string(names[k]) + " max rel " + fmt("%.2e", worst[k]) + ", ";
  out.detail += std::to_string(kInstances) + " instances each (" + std::to_string(resampled) +
                " resampled near kinks), " + fmt("%.1f s", secs);
  return out;
}

Outcome loss_algebra() {
  Outcome out;
  std::ostringstream why;
  double worst_uniform = 0, worst_beta0 = 0, worst_pair = 0;
  bool alpha_exact = true;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Rng rng(seed);
    auto model = testing::random_model(3 + static_cast<int>(rng.uniform_index(6)), seed);
    const int n = model.vocab_size();
    const auto doc = testing::random_seq(rng, n, 4, false);
    const auto target = testing::random_seq(rng, n, 1 + static_cast<int>(rng.uniform_index(5)), true);

    // Random model: beta = 0 smoothing reduces to the negative log-likelihood.
    const double ce0 = loss::label_smoothed_ce(model, doc, target, 0.0);
    worst_beta0 = std::max(worst_beta0, std::abs(ce0 + lm::sequence_log_prob(model, doc, target)));

    // Multi-task with alpha = 0 is the smoothed CE.
    std::vector<lm::TokenSeq> ranked{testing::random_seq(rng, n, 2, true),
                                     testing::random_seq(rng, n, 3, true)};
    loss::LossConfig cfg;
    cfg.alpha = 0.0;
    cfg.beta = 0.3;
    cfg.lambda = 2.0;
    const auto ctx = model.encode_document(doc);
    if (loss::multi_task_loss(model, ctx, target, ranked, cfg) !=
        loss::label_smoothed_ce(model, ctx, target, cfg.beta)) {
      alpha_exact = false;
    }

    // Uniform output layer: every position costs ln N whatever beta is.
    for (double& v : model.block(lm::ToyLM::kOutW)) v = 0.0;
    for (double& v : model.block(lm::ToyLM::kOutB)) v = 0.0;
    for (double beta : {0.0, 0.1, 0.5, 0.9}) {
      const double per_pos = loss::label_smoothed_ce(model, doc, target, beta) /
                             static_cast<double>(target.length());
      worst_uniform = std::max(worst_uniform, std::abs(per_pos - std::log(static_cast<double>(n))));
    }

    // Equal-probability pair under the uniform model.
    const int len = 1 + static_cast<int>(rng.uniform_index(4));
    std::vector<lm::TokenSeq> pair{testing::random_seq(rng, n, len, true),
                                   testing::random_seq(rng, n, len, true)};
    const double lambda = 0.5 + 100 * rng.uniform();
    const double ctr = loss::contrastive_loss(model, model.encode_document(doc), pair, lambda, true);
    worst_pair = std::max(worst_pair, std::abs(ctr - std::log(2.0) / lambda));
  }
  out.pass = worst_uniform <= 1e-9 && worst_beta0 <= 1e-9 && worst_pair <= 1e-12 && alpha_exact;
  out.detail = "uniform |CE/pos - ln N| " + fmt("%.1e", worst_uniform) + " (tol 1e-9), beta=0 |CE + log p| " +
               fmt("%.1e", worst_beta0) + " (tol 1e-9), equal pair |L - ln2/lambda| " +
               fmt("%.1e", worst_pair) + " (tol 1e-12), alpha=0 exact: " + (alpha_exact ? "yes" : "no");
  return out;
}

Outcome decoding_oracles() {
  Outcome out;
  int exhaustive = 0, identical = 0, greedy = 0, total = 0;
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    ++total;
    Rng rng(seed);
    // Three content tokens plus the special tokens.
    const auto model = testing::random_model(3, seed, 4, 2, 6, 2.0);
    const auto doc = testing::random_seq(rng, model.vocab_size(), 3, false);

    decode::BeamConfig cfg;
    cfg.groups = 3;
    cfg.beams_per_group = 21;  // every sequence of length <= 2 survives
    cfg.diversity_penalty = 0.5 * static_cast<double>(seed % 4);
    cfg.max_len = 2;
    const auto beams = decode::diverse_beam_search(model, doc, cfg);
    const auto oracle = testing::exhaustive_diverse_search(model, doc, cfg.groups,
                                                           cfg.diversity_penalty, 2, 0);
    bool same = beams.groups.size() == oracle.size();
    for (size_t g = 0; same && g < oracle.size(); ++g) {
      same = beams.groups[g].size() == oracle[g].size();
      for (size_t i = 0; same && i < oracle[g].size(); ++i) {
        same = beams.groups[g][i].seq.ids == oracle[g][i].ids &&
               std::abs(beams.groups[g][i].score - oracle[g][i].score) <= 1e-12;
      }
    }
    exhaustive += same;

    decode::BeamConfig flat = cfg;
    flat.diversity_penalty = 0.0;
    flat.groups = 4;
    flat.beams_per_group = 3;
    flat.max_len = 6;
    const auto zero = decode::diverse_beam_search(model, doc, flat);
    bool groups_equal = true;
    for (size_t g = 1; g < zero.groups.size(); ++g) {
      for (size_t i = 0; i < zero.groups[0].size(); ++i) {
        groups_equal = groups_equal && zero.groups[g].size() == zero.groups[0].size() &&
                       zero.groups[g][i].seq == zero.groups[0][i].seq &&
                       zero.groups[g][i].score == zero.groups[0][i].score;
      }
    }
    identical += groups_equal;

    decode::BeamConfig single;
    single.groups = 1;
    single.beams_per_group = 1;
    single.max_len = 8;
    const auto one = decode::diverse_beam_search(model, doc, single);
    greedy += one.groups[0].size() == 1 &&
              one.groups[0][0].seq == decode::greedy_decode(model, doc, single.max_len);
  }
  out.pass = exhaustive == total && identical == total && greedy == total;
  out.detail = "exhaustive match " + std::to_string(exhaustive) + "/" + std::to_string(total) +
               ", gamma=0 identical groups " + std::to_string(identical) + "/" +
               std::to_string(total) + ", greedy == (G=1,B=1) " + std::to_string(greedy) + "/" +
               std::to_string(total);
  return out;
}

Outcome subset_selection() {
  Outcome out;
  int matched = 0, matched_any = 0, total = 0;
  std::string first_miss;
  Rng rng(2024);
  const std::vector<std::string> words{"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 2000; ++trial) {
    const size_t n = 2 + rng.uniform_index(5);
    const size_t k = 1 + rng.uniform_index(std::min<size_t>(3, n));
    decode::SimilarityMatrix sim;
    if (trial % 2 == 0) {
      // Random symmetric matrix, values on a coarse grid so ties happen.
      sim.assign(n, std::vector<double>(n, 1.0));
      for (size_t i = 0; i < n; ++i) {
        for (size_t j = i + 1; j < n; ++j) sim[i][j] = sim[j][i] = rng.uniform_index(11) / 10.0;
      }
    } else {
      // ROUGE-1 similarity between random short texts.
      std::vector<std::string> texts;
      for (size_t i = 0; i < n; ++i) {
        std::string t;
        const size_t len = 1 + rng.uniform_index(5);
        for (size_t w = 0; w < len; ++w) t += words[rng.uniform_index(words.size())] + " ";
        texts.push_back(t);
      }
      sim = decode::rouge1_similarity(texts);
    }
    const auto picked = decode::select_diverse_subset(sim, k);
    const double greedy_value = testing::max_pairwise(sim, picked);
    const double best = testing::best_max_min(sim, k);
    const double best_any = testing::best_max_min(sim, k, /*require_seed=*/false);
    matched_any += greedy_value == best_any;
    ++total;
    if (greedy_value == best) {
      ++matched;
    } else if (first_miss.empty()) {
      std::ostringstream s;
      s << "first miss: n=" << n << " k=" << k << " greedy max-sim " << greedy_value
        << " vs optimum " << best << "; ";
      first_miss = s.str();
    }
  }
  out.pass = matched == total;
  out.detail = first_miss + std::to_string(matched) + "/" + std::to_string(total) +
               " instances (n<=6, k<=3) reach the exhaustive max-min optimum over subsets "
               "holding the seed; " +
               std::to_string(matched_any) + "/" + std::to_string(total) +
               " reach it over all subsets";
  return out;
}

std::optional<std::string> oracle_decision(const std::string& value) {
  // Strip whitespace, wrapping quotes/asterisks/backticks, one trailing
  // period, wrappers again; compare case-insensitively.
  auto strip = [](std::string s) {
    auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v'; };
    auto wrap = [](char c) { return c == '"' || c == '\'' || c == '*' || c == '`'; };
    while (!s.empty() && ws(s.front())) s.erase(0, 1);
    while (!s.empty() && ws(s.back())) s.pop_back();
    while (!s.empty() && wrap(s.front())) s.erase(0, 1);
    while (!s.empty() && wrap(s.back())) s.pop_back();
    while (!s.empty() && ws(s.front())) s.erase(0, 1);
    while (!s.empty() && ws(s.back())) s.pop_back();
    return s;
  };
  std::string v = strip(value);
  if (!v.empty() && v.back() == '.') v.pop_back();
  v = strip(v);
  for (char& c : v) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (v == "1" || v == "2" || v == "tie") return v;
  return std::nullopt;
}

Outcome parsers() {
  Outcome out;
  std::string failures;
  int round_trips = 0;
  // Exhaustive for n <= 4.
  for (int n = 1; n <= 4; ++n) {
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    do {
      eval::Ranking r{perm, "explanation for n=" + std::to_string(n)};
      if (eval::parse_ranking(eval::format_ranking(r), n) == r) {
        ++round_trips;
      } else if (failures.empty()) {
        failures = "round trip failed for n=" + std::to_string(n) + "; ";
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  const int exhaustive_total = 1 + 2 + 6 + 24;
  // Randomised for n in 5..8.
  Rng rng(99);
  int random_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 5 + static_cast<int>(rng.uniform_index(4));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 1);
    rng.shuffle(perm);
    eval::Ranking r{perm, "summary " + std::to_string(perm[0]) + " covers the key facts"};
    if (eval::parse_ranking(eval::format_ranking(r), n) == r) ++random_ok;
  }
  const auto example = eval::parse_ranking(
      "Explanation: e\nRanking: 4, 2, 7, 3, 5, 6, 8, 1", 8);
  const bool example_ok = example.permutation == std::vector<int>{4, 2, 7, 3, 5, 6, 8, 1};

  // Pairwise: fuzz values drawn from near-misses and random printable strings.
  const std::vector<std::string> seeds{"1", "2", "tie", "Tie", "TIE", "1.", " 2 ", "\"tie\"",
                                       "**1**", "0", "3", "12", "1 2", "ties", "t ie", "tie!",
                                       "one", "two", "", ".", "1..", "-1", "+1", "1.0",
                                       "maybe", "both", "none", "'2'.", "2,", "tie tie"};
  const std::string alphabet = "12tieTIE .\"'*`,!-+0a3 ";
  int accepted = 0, rejected = 0, disagreements = 0;
  std::string disagreement;
  auto check = [&](const std::string& value) {
    const auto expect = oracle_decision(value);
    std::optional<std::string> got;
    try {
      got = std::string(eval::to_string(eval::parse_decision("Explanation: x\nDecision: " + value).outcome));
    } catch (const eval::ParseError&) {
    }
    if (got != expect) {
      ++disagreements;
      if (disagreement.empty()) disagreement = "'" + value + "'";
    }
    (got ? accepted : rejected) += 1;
  };
  for (const auto& s : seeds) check(s);
  for (int i = 0; i < 5000; ++i) {
    std::string v;
    const size_t len = rng.uniform_index(6);
    for (size_t c = 0; c < len; ++c) v.push_back(alphabet[rng.uniform_index(alphabet.size())]);
    check(v);
  }
  out.pass = round_trips == exhaustive_total && random_ok == 1000 && example_ok &&
             disagreements == 0;
  out.detail = failures + "round trip exhaustive " + std::to_string(round_trips) + "/" +
               std::to_string(exhaustive_total) + ", randomized " + std::to_string(random_ok) +
               "/1000, example ranking " + (example_ok ? "ok" : "wrong") + ", decisions " +
               std::to_string(accepted) + " accepted / " + std::to_string(rejected) +
               " rejected, " + std::to_string(disagreements) + " disagreements with oracle" +
               (disagreement.empty() ? "" : " (first " + disagreement + ")");
  return out;
}

Outcome rouge() {
  Outcome out;
  Rng rng(5);
  const std::vector<std::string> words{"the", "cat", "sat", "on", "mat", "The", "dog", "ran"};
  int equal = 0;
  for (int i = 0; i < 500; ++i) {
    auto make = [&] {
      std::string s;
      const size_t len = rng.uniform_index(8);
      for (size_t w = 0; w < len; ++w) s += words[rng.uniform_index(words.size())] + (rng.uniform() < 0.2 ? "  " : " ");
      return s;
    };
    const std::string a = make(), b = make();
    bool same = true;
    for (int n : {1, 2}) same = same && eval::rouge_f1(a, b, n) == testing::brute_rouge_f1(a, b, n);
    equal += same;
  }
  const double r1 = eval::rouge_f1("the cat sat", "the cat ran", 1);
  const double r2 = eval::rouge_f1("the cat sat", "the cat ran", 2);
  const bool example = std::abs(r1 - 2.0 / 3.0) < 1e-15 && std::abs(r2 - 0.5) < 1e-15;
  out.pass = equal == 500 && example;
  out.detail = std::to_string(equal) + "/500 random pairs equal the brute-force counter, " +
               "\"the cat sat\"/\"the cat ran\" R1 " + fmt("%.6f", r1) + " R2 " + fmt("%.6f", r2);
  return out;
}

// The mock experiment runs through the HTTP backend against a local mock
// server with an on-disk cache; the second run reuses the cache.
struct ExperimentRuns {
  bool ok = false;
  std::string error;
  pipeline::ExperimentResult first;
  pipeline::ExperimentResult second;
  double first_seconds = 0;
  long backend_calls_first = 0;
  long backend_calls_second = 0;
  llm::ClientStats stats_second;
};

ExperimentRuns run_experiments() {
  ExperimentRuns runs;
  const auto root = std::filesystem::temp_directory_path() / "llmref_acceptance";
  std::filesystem::remove_all(root);
  auto mock = std::make_shared<llm::MockBackend>();
  llm::MockServer server(mock);
  const int port = server.start();
  llm::HttpOptions http;
  http.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  http.require_api_key = false;
  llm::ClientOptions options;
  options.rates.default_per_1k = 0.002;
  const auto config = pipeline::ExperimentConfig::mock_defaults();
  try {
    {
      auto client = std::make_unique<llm::LlmClient>(
          std::make_shared<llm::HttpBackend>(http),
          std::make_shared<llm::ResponseCache>(root / "cache"), options);
      const auto t0 = Clock::now();
      runs.first = pipeline::run_experiment(config, *client, root / "run1");
      runs.first_seconds = seconds_since(t0);
      runs.backend_calls_first = mock->calls();
    }
    auto client = std::make_unique<llm::LlmClient>(
        std::make_shared<llm::HttpBackend>(http),
        std::make_shared<llm::ResponseCache>(root / "cache"), options);
    runs.second = pipeline::run_experiment(config, *client, root / "run2");
    runs.backend_calls_second = mock->calls() - runs.backend_calls_first;
    runs.stats_second = client->stats();
    runs.ok = true;
  } catch (const std::exception& e) {
    runs.error = e.what();
  }
  server.stop();
  return runs;
}

Outcome end_to_end(const ExperimentRuns& runs) {
  Outcome out;
  if (!runs.ok) return {false, "experiment failed: " + runs.error};
  const auto& r = runs.first;
  const double gain = r.tau_contrastive.mean_tau - r.tau_mle.mean_tau;
  const double drop = r.rouge1_mle - r.rouge1_contrastive;
  // Determinism: the warm-cache rerun must reproduce every checkpoint and metric.
  const auto held1 = runs.first.to_json()["held_out"];
  const auto held2 = runs.second.to_json()["held_out"];
  const bool deterministic =
      held1 == held2 && runs.first.report.to_json() == runs.second.report.to_json() &&
      runs.first.contrastive.input_hashes == runs.second.contrastive.input_hashes &&
      runs.first.mle.input_hashes == runs.second.mle.input_hashes &&
      runs.first.warm_start.input_hashes == runs.second.warm_start.input_hashes;
  const size_t docs = pipeline::ExperimentConfig::mock_defaults().corpus.documents;
  out.pass = docs >= 300 && gain >= 0.10 && drop <= 2.0 && runs.first_seconds < 600 && deterministic;
  out.detail = std::to_string(docs) + " documents, held-out tau MLE " + fmt("%.3f", r.tau_mle.mean_tau) +
               " -> Contrastive " + fmt("%.3f", r.tau_contrastive.mean_tau) + " (gain " +
               fmt("%.3f", gain) + ", need >= 0.10), ROUGE-1 " + fmt("%.2f", r.rouge1_mle) + " -> " +
               fmt("%.2f", r.rouge1_contrastive) + " (drop " + fmt("%.2f", drop) +
               ", need <= 2), runtime " + fmt("%.1f s", runs.first_seconds) +
               ", rerun identical: " + (deterministic ? "yes" : "no");
  return out;
}

Outcome cache_and_budget(const ExperimentRuns& runs) {
  Outcome out;
  if (!runs.ok) return {false, "experiment failed: " + runs.error};
  const auto& b1 = runs.first.budget;
  const auto& b2 = runs.second.budget;
  const bool same_totals = b1["spent"] == b2["spent"];
  bool same_tallies = true;
  for (auto& [model, tally] : b1["models"].items()) {
    for (const char* key : {"prompt_tokens", "completion_tokens", "requests", "cost"}) {
      same_tallies = same_tallies && b2["models"].contains(model) && b2["models"][model][key] == tally[key];
    }
  }
  const std::string table = runs.first.report.table();
  const std::string header = table.substr(0, table.find('\n'));
  const auto cols = text::split_whitespace(header);
  const std::vector<std::string> expected{"System", "Win", "Lose", "R1", "R2", "Len."};
  const bool layout = cols.size() >= expected.size() &&
                      std::equal(expected.begin(), expected.end(), cols.begin());
  out.pass = runs.backend_calls_first > 0 && runs.backend_calls_second == 0 &&
             runs.stats_second.network_calls == 0 && same_totals && same_tallies && layout;
  out.detail = "backend calls first run " + std::to_string(runs.backend_calls_first) +
               ", warm rerun " + std::to_string(runs.backend_calls_second) + " (" +
               std::to_string(runs.stats_second.cache_hits) + " cache hits), spent " +
               b1["spent"].dump() + " vs " + b2["spent"].dump() + ", tallies identical: " +
               (same_tallies ? "yes" : "no") + ", header: " + header;
  return out;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  ExperimentRuns runs;
  bool ran = false;
  auto experiments = [&]() -> const ExperimentRuns& {
    if (!ran) {
      runs = run_experiments();
      ran = true;
    }
    return runs;
  };
  const std::vector<Criterion> criteria{
      {"gradient-check", gradient_check},
      {"loss-algebra", loss_algebra},
      {"decoding-oracles", decoding_oracles},
      {"subset-selection", subset_selection},
      {"parsers", parsers},
      {"rouge", rouge},
      {"end-to-end-mock", [&] { return end_to_end(experiments()); }},
      {"cache-and-budget", [&] { return cache_and_budget(experiments()); }},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}

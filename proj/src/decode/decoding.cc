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

#include "llmref/decode/decoding.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "llmref/eval/rouge.h"

namespace llmref::decode {

using lm::TokenSeq;
using lm::Vocabulary;

void BeamConfig::validate() const {
  if (groups < 1) throw std::invalid_argument("beam groups must be >= 1");
  if (beams_per_group < 1) throw std::invalid_argument("beams per group must be >= 1");
  if (!(diversity_penalty >= 0.0)) throw std::invalid_argument("diversity penalty must be >= 0");
  if (min_len < 0 || max_len < min_len || max_len < 1) {
    throw std::invalid_argument("need max_len >= min_len >= 0 and max_len >= 1");
  }
}

std::vector<Hypothesis> BeamResult::flatten() const {
  std::vector<Hypothesis> out;
  for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

TokenSeq greedy_decode(const lm::ToyLM& model, const TokenSeq& document, int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  const auto doc = model.encode_document(document);
  TokenSeq out;
  out.ids.push_back(Vocabulary::kBos);
  for (int t = 0; t < max_len; ++t) {
    const auto probs = model.forward(doc, out.ids);
    int best = -1;
    for (int v = 0; v < model.vocab_size(); ++v) {
      if (v == Vocabulary::kBos) continue;
      if (best < 0 || probs[v] > probs[best]) best = v;
    }
    out.ids.push_back(best);
    if (best == Vocabulary::kEos) break;
  }
  return out;
}

namespace {

struct Extension {
  size_t parent;
  int token;
  double log_prob;
  double penalty;
  double score;
};

bool seq_less(const TokenSeq& a, const TokenSeq& b) { return a.ids < b.ids; }

}  // namespace

BeamResult diverse_beam_search(const lm::ToyLM& model, const TokenSeq& document,
                               const BeamConfig& config) {
  config.validate();
  const auto doc = model.encode_document(document);
  const int n = model.vocab_size();
  const size_t groups = config.groups;
  const size_t width = config.beams_per_group;
  const double gamma = config.diversity_penalty;

  std::vector<std::vector<Hypothesis>> active(groups);
  std::vector<std::vector<Hypothesis>> finished(groups);
  for (auto& a : active) {
    Hypothesis root;
    root.seq.ids.push_back(Vocabulary::kBos);
    a.push_back(std::move(root));
  }

  std::vector<Extension> ext;
  for (int t = 1; t <= config.max_len; ++t) {
    // Tokens chosen at this step by earlier groups.
    std::vector<int> step_counts(n, 0);
    const bool allow_eos = t - 1 >= config.min_len;
    for (size_t g = 0; g < groups; ++g) {
      if (active[g].empty()) continue;
      ext.clear();
      for (size_t b = 0; b < active[g].size(); ++b) {
        const auto& hyp = active[g][b];
        const auto probs = model.forward(doc, hyp.seq.ids);
        for (int v = 0; v < n; ++v) {
          if (v == Vocabulary::kBos) continue;
          if (v == Vocabulary::kEos && !allow_eos) continue;
          Extension e;
          e.parent = b;
          e.token = v;
          e.log_prob = hyp.log_prob + lm::clamped_log(probs[v]);
          e.penalty = hyp.penalty + step_counts[v];
          e.score = e.log_prob / static_cast<double>(t) - gamma * e.penalty;
          ext.push_back(e);
        }
      }
      const size_t keep = std::min(width, ext.size());
      std::partial_sort(ext.begin(), ext.begin() + keep, ext.end(),
                        [](const Extension& a, const Extension& b) {
                          if (a.score != b.score) return a.score > b.score;
                          if (a.token != b.token) return a.token < b.token;
                          return a.parent < b.parent;
                        });
      std::vector<Hypothesis> next;
      for (size_t i = 0; i < keep; ++i) {
        const auto& e = ext[i];
        Hypothesis h;
        h.seq = active[g][e.parent].seq;
        h.seq.ids.push_back(e.token);
        h.log_prob = e.log_prob;
        h.penalty = e.penalty;
        h.score = e.score;
        ++step_counts[e.token];
        if (e.token == Vocabulary::kEos || t == config.max_len) {
          finished[g].push_back(std::move(h));
        } else {
          next.push_back(std::move(h));
        }
      }
      active[g] = std::move(next);
    }
  }

  BeamResult result;
  result.groups.resize(groups);
  for (size_t g = 0; g < groups; ++g) {
    auto& f = finished[g];
    std::stable_sort(f.begin(), f.end(), [](const Hypothesis& a, const Hypothesis& b) {
      if (a.score != b.score) return a.score > b.score;
      return seq_less(a.seq, b.seq);
    });
    if (f.size() > width) f.resize(width);
    result.groups[g] = std::move(f);
  }
  return result;
}

SimilarityMatrix rouge1_similarity(const std::vector<std::string>& candidates) {
  const size_t n = candidates.size();
  SimilarityMatrix sim(n, std::vector<double>(n, 1.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      sim[i][j] = sim[j][i] = eval::rouge_f1(candidates[i], candidates[j], 1);
    }
  }
  return sim;
}

std::vector<size_t> select_diverse_subset(const SimilarityMatrix& similarity, size_t k) {
  const size_t n = similarity.size();
  if (k > n) {
    throw std::invalid_argument("cannot select " + std::to_string(k) + " of " +
                                std::to_string(n) + " candidates");
  }
  std::vector<size_t> selected;
  if (k == 0) return selected;
  std::vector<bool> taken(n, false);
  // Running max similarity of every candidate to the selected set.
  std::vector<double> worst(n, -std::numeric_limits<double>::infinity());
  auto take = [&](size_t idx) {
    selected.push_back(idx);
    taken[idx] = true;
    for (size_t j = 0; j < n; ++j) worst[j] = std::max(worst[j], similarity[j][idx]);
  };
  take(0);
  while (selected.size() < k) {
    size_t best = n;
    for (size_t j = 0; j < n; ++j) {
      if (taken[j]) continue;
      if (best == n || worst[j] < worst[best]) best = j;
    }
    take(best);
  }
  return selected;
}

std::vector<std::string> select_diverse_subset(const std::vector<std::string>& candidates,
                                               size_t k) {
  if (k > candidates.size()) {
    throw std::invalid_argument("cannot select " + std::to_string(k) + " of " +
                                std::to_string(candidates.size()) + " candidates");
  }
  std::vector<std::string> out;
  for (size_t idx : select_diverse_subset(rouge1_similarity(candidates), k)) {
    out.push_back(candidates[idx]);
  }
  return out;
}

std::vector<std::string> generate_candidates(const lm::ToyLM& model,
                                             const TokenSeq& document,
                                             const BeamConfig& config,
                                             PoolSelection selection, size_t count) {
  const auto beams = diverse_beam_search(model, document, config);
  const auto& vocab = model.vocab();

  // Best distinct beam of each group.
  struct Entry {
    std::string text;
    double norm_lp;
  };
  std::vector<Entry> pool;
  std::unordered_set<std::string> seen;
  for (const auto& group : beams.groups) {
    for (const auto& hyp : group) {
      auto text = vocab.decode(hyp.seq);
      if (text.empty() || seen.count(text)) continue;
      seen.insert(text);
      pool.push_back({std::move(text), hyp.normalized_log_prob()});
      break;
    }
  }

  std::vector<std::string> out;
  if (selection == PoolSelection::kFirstOfGroup) {
    for (auto& e : pool) {
      if (out.size() == count) break;
      out.push_back(std::move(e.text));
    }
    return out;
  }
  std::stable_sort(pool.begin(), pool.end(),
                   [](const Entry& a, const Entry& b) { return a.norm_lp > b.norm_lp; });
  std::vector<std::string> texts;
  for (auto& e : pool) texts.push_back(std::move(e.text));
  return select_diverse_subset(texts, std::min(count, texts.size()));
}

}  // namespace llmref::decode

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

#include "llmref/lm/vocab.h"

#include <algorithm>
#include <map>

#include "llmref/util/text.h"

namespace llmref::lm {

Vocabulary::Vocabulary(std::vector<std::string> regular) {
  tokens_.reserve(regular.size() + kNumSpecial);
  tokens_.emplace_back(kBosToken);
  tokens_.emplace_back(kEosToken);
  tokens_.emplace_back(kUnkToken);
  for (auto& t : regular) tokens_.push_back(std::move(t));
  if (tokens_.size() < 4) {
    throw VocabError("vocabulary needs at least one regular token");
  }
  for (size_t i = 0; i < tokens_.size(); ++i) {
    if (tokens_[i].empty()) throw VocabError("empty token in vocabulary");
    if (!index_.emplace(tokens_[i], static_cast<int>(i)).second) {
      throw VocabError("duplicate token '" + tokens_[i] + "'");
    }
  }
}

int Vocabulary::id_of(std::string_view token) const {
  auto it = index_.find(std::string(token));
  if (it == index_.end() || it->second < kNumSpecial) return kUnk;
  return it->second;
}

TokenSeq Vocabulary::encode(std::string_view text) const {
  TokenSeq seq;
  seq.ids.push_back(kBos);
  for (const auto& t : text::tokenize(text)) seq.ids.push_back(id_of(t));
  return seq;
}

std::string Vocabulary::decode(const TokenSeq& seq) const {
  std::string out;
  for (int id : seq.ids) {
    if (id == kBos || id == kEos) continue;
    if (!out.empty()) out += ' ';
    out += token(id);
  }
  return out;
}

void Vocabulary::check(const TokenSeq& seq) const {
  if (seq.ids.empty() || seq.ids.front() != kBos) {
    throw VocabError("token sequence must begin with BOS");
  }
  for (int id : seq.ids) {
    if (id < 0 || id >= size()) {
      throw VocabError("token id " + std::to_string(id) + " out of range");
    }
  }
}

Vocabulary build_vocab(const std::vector<std::string>& corpus, int min_freq) {
  if (corpus.empty()) throw VocabError("cannot build vocabulary from empty corpus");
  if (min_freq < 1) throw VocabError("min_freq must be >= 1");
  std::map<std::string, int> freq;
  for (const auto& doc : corpus) {
    for (auto& t : text::tokenize(doc)) ++freq[t];
  }
  std::vector<std::pair<std::string, int>> kept;
  for (auto& [tok, n] : freq) {
    if (n < min_freq) continue;
    if (tok == Vocabulary::kBosToken || tok == Vocabulary::kEosToken ||
        tok == Vocabulary::kUnkToken) {
      continue;
    }
    kept.emplace_back(tok, n);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  std::vector<std::string> regular;
  regular.reserve(kept.size());
  for (auto& [tok, n] : kept) regular.push_back(tok);
  return Vocabulary(std::move(regular));
}

TokenSeq with_eos(TokenSeq seq) {
  seq.ids.push_back(Vocabulary::kEos);
  return seq;
}

}  // namespace llmref::lm

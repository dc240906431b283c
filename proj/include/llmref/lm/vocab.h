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

#ifndef LLMREF_LM_VOCAB_H_
#define LLMREF_LM_VOCAB_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace llmref::lm {

class VocabError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Token ids begin with BOS. length() excludes it.
struct TokenSeq {
  std::vector<int> ids;

  size_t length() const { return ids.empty() ? 0 : ids.size() - 1; }
  bool operator==(const TokenSeq&) const = default;
};

class Vocabulary {
 public:
  static constexpr int kBos = 0;
  static constexpr int kEos = 1;
  static constexpr int kUnk = 2;
  static constexpr int kNumSpecial = 3;
  static constexpr std::string_view kBosToken = "<bos>";
  static constexpr std::string_view kEosToken = "<eos>";
  static constexpr std::string_view kUnkToken = "<unk>";

  // `regular` holds the non-special tokens in id order (ids start at
  // kNumSpecial). Throws VocabError on duplicates or when the total size is
  // below 4.
  explicit Vocabulary(std::vector<std::string> regular);

  int size() const { return static_cast<int>(tokens_.size()); }
  const std::vector<std::string>& tokens() const { return tokens_; }
  const std::string& token(int id) const { return tokens_.at(id); }
  int id_of(std::string_view token) const;
  bool is_special(int id) const { return id >= 0 && id < kNumSpecial; }

  // Lowercased whitespace tokens; unknown words map to UNK. Never emits EOS.
  TokenSeq encode(std::string_view text) const;
  // Skips BOS/EOS; UNK renders as "<unk>".
  std::string decode(const TokenSeq& seq) const;

  // Throws VocabError when the sequence does not start with BOS or holds an
  // out-of-range id.
  void check(const TokenSeq& seq) const;

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

// Keeps every token with frequency >= min_freq, ordered by frequency
// descending then lexicographically.
Vocabulary build_vocab(const std::vector<std::string>& corpus, int min_freq);

inline TokenSeq encode(const Vocabulary& vocab, std::string_view text) {
  return vocab.encode(text);
}
inline std::string decode(const Vocabulary& vocab, const TokenSeq& seq) {
  return vocab.decode(seq);
}

// Copy of `seq` with EOS appended. Training targets and scored candidates are
// EOS-terminated so the model learns when to stop.
TokenSeq with_eos(TokenSeq seq);

}  // namespace llmref::lm

#endif  // LLMREF_LM_VOCAB_H_

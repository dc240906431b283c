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

#ifndef LLMREF_LLM_MOCK_BACKEND_H_
#define LLMREF_LLM_MOCK_BACKEND_H_

#include <atomic>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "llmref/llm/backend.h"

namespace llmref::llm {

// Deterministic stand-in for a reference LLM. Every rule is a pure function
// of the request:
//
//   generation   the article's first three sentences.
//   quality      q(S) = ROUGE-1 recall of S against those lead sentences.
//   scoring      every continuation token gets log(kQualityFloor +
//                (1 - kQualityFloor) * q(S)); context tokens get
//                kContextLogProb. Tokens are whitespace-delimited.
//   list-wise    candidates ranked by q descending, ties by position.
//   pair-wise    higher q wins; equal q is a tie.
namespace mock {

inline constexpr double kQualityFloor = 0.05;
inline constexpr double kContextLogProb = -0.6931471805599453;  // ln 0.5

std::string lead_summary(std::string_view article);
double quality(std::string_view article, std::string_view candidate);
double token_logprob(std::string_view article, std::string_view candidate);

}  // namespace mock

struct MockOptions {
  bool supports_logprobs = true;
  // Fault injection: the first N calls fail with the given error.
  int fail_network_first = 0;
  int rate_limit_first = 0;
  int malformed_first = 0;
};

class MockBackend : public Backend {
 public:
  // Optional override: when it returns text, that text is the completion.
  using Responder =
      std::function<std::optional<std::string>(const LlmRequest&, long call_index)>;

  explicit MockBackend(MockOptions options = {}) : options_(options) {}

  std::string id() const override { return "mock-v1"; }
  bool supports_logprobs() const override { return options_.supports_logprobs; }
  LlmResponse complete(const LlmRequest& request) override;

  void set_responder(Responder responder);
  // Number of complete() invocations, failed ones included.
  long calls() const { return calls_.load(); }

 private:
  LlmResponse score(const LlmRequest& request) const;
  std::string generate(const std::string& prompt) const;

  MockOptions options_;
  std::atomic<long> calls_{0};
  std::mutex responder_mu_;
  Responder responder_;
};

}  // namespace llmref::llm

#endif  // LLMREF_LLM_MOCK_BACKEND_H_

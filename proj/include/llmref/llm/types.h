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

#ifndef LLMREF_LLM_TYPES_H_
#define LLMREF_LLM_TYPES_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace llmref::llm {

class LlmError : public std::runtime_error {
 public:
  enum class Kind {
    kInvalidRequest,
    kCredentials,
    kNetwork,        // transport failure or 5xx; retried
    kRateLimited,    // 429; retried, counts against attempts
    kHttp,           // other non-success status; not retried
    kMalformedReply,
    kCapability,     // backend cannot serve this request shape
    kBudgetExceeded,
  };

  LlmError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }
  bool retryable() const { return kind_ == Kind::kNetwork || kind_ == Kind::kRateLimited; }

 private:
  Kind kind_;
};

std::string_view to_string(LlmError::Kind kind);

struct ChatMessage {
  std::string role;
  std::string content;

  bool operator==(const ChatMessage&) const = default;
};

struct LlmRequest {
  std::string model_name;
  std::string prompt;                 // completion-style payload
  std::vector<ChatMessage> messages;  // chat-style payload when non-empty
  double temperature = 0.0;
  int max_tokens = 256;
  bool want_logprobs = false;
  bool echo = false;  // score the prompt itself instead of generating
  // Re-prompt counter. Part of the cache key, never sent to the backend.
  int attempt = 0;

  bool chat() const { return !messages.empty(); }
  // Concatenated user-visible text (prompt, or message contents).
  std::string text() const;
  void validate() const;
  // Canonical JSON of every field; object keys are emitted sorted.
  nlohmann::json payload() const;
};

struct TokenLogProb {
  std::string token;
  double logprob = 0.0;
  size_t offset = 0;  // byte offset of the token in prompt + completion

  bool operator==(const TokenLogProb&) const = default;
};

struct Usage {
  int64_t prompt_tokens = 0;
  int64_t completion_tokens = 0;

  int64_t total() const { return prompt_tokens + completion_tokens; }
  bool operator==(const Usage&) const = default;
};

struct LlmResponse {
  std::string text;
  std::optional<std::vector<TokenLogProb>> token_logprobs;
  Usage usage;
  bool cached = false;

  nlohmann::json to_json() const;
  static LlmResponse from_json(const nlohmann::json& j);
};

}  // namespace llmref::llm

#endif  // LLMREF_LLM_TYPES_H_

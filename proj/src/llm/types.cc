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

#include "llmref/llm/types.h"

namespace llmref::llm {

std::string_view to_string(LlmError::Kind kind) {
  switch (kind) {
    case LlmError::Kind::kInvalidRequest:
      return "invalid_request";
    case LlmError::Kind::kCredentials:
      return "credentials";
    case LlmError::Kind::kNetwork:
      return "network";
    case LlmError::Kind::kRateLimited:
      return "rate_limited";
    case LlmError::Kind::kHttp:
      return "http";
    case LlmError::Kind::kMalformedReply:
      return "malformed_reply";
    case LlmError::Kind::kCapability:
      return "capability";
    case LlmError::Kind::kBudgetExceeded:
      return "budget_exceeded";
  }
  return "unknown";
}

std::string LlmRequest::text() const {
  if (!chat()) return prompt;
  std::string out;
  for (const auto& m : messages) {
    if (!out.empty()) out += "\n\n";
    out += m.content;
  }
  return out;
}

void LlmRequest::validate() const {
  using K = LlmError::Kind;
  if (model_name.empty()) throw LlmError(K::kInvalidRequest, "model name is empty");
  if (!(temperature >= 0.0)) throw LlmError(K::kInvalidRequest, "temperature must be >= 0");
  if (max_tokens < 0) throw LlmError(K::kInvalidRequest, "max_tokens must be >= 0");
  if (chat() && !prompt.empty()) {
    throw LlmError(K::kInvalidRequest, "request has both a prompt and chat messages");
  }
  if (echo && chat()) {
    throw LlmError(K::kInvalidRequest, "echo scoring needs a completion-style prompt");
  }
}

nlohmann::json LlmRequest::payload() const {
  nlohmann::json msgs = nlohmann::json::array();
  for (const auto& m : messages) msgs.push_back({{"role", m.role}, {"content", m.content}});
  return {{"model", model_name},     {"prompt", prompt},
          {"messages", msgs},        {"temperature", temperature},
          {"max_tokens", max_tokens}, {"logprobs", want_logprobs},
          {"echo", echo},            {"attempt", attempt}};
}

nlohmann::json LlmResponse::to_json() const {
  nlohmann::json j;
  j["text"] = text;
  j["usage"] = {{"prompt_tokens", usage.prompt_tokens},
                {"completion_tokens", usage.completion_tokens}};
  if (token_logprobs) {
    nlohmann::json toks = nlohmann::json::array();
    for (const auto& t : *token_logprobs) {
      toks.push_back({{"token", t.token}, {"logprob", t.logprob}, {"offset", t.offset}});
    }
    j["token_logprobs"] = std::move(toks);
  }
  return j;
}

LlmResponse LlmResponse::from_json(const nlohmann::json& j) {
  LlmResponse r;
  r.text = j.at("text").get<std::string>();
  r.usage.prompt_tokens = j.at("usage").at("prompt_tokens").get<int64_t>();
  r.usage.completion_tokens = j.at("usage").at("completion_tokens").get<int64_t>();
  if (j.contains("token_logprobs")) {
    std::vector<TokenLogProb> toks;
    for (const auto& t : j["token_logprobs"]) {
      toks.push_back({t.at("token").get<std::string>(), t.at("logprob").get<double>(),
                      t.at("offset").get<size_t>()});
    }
    r.token_logprobs = std::move(toks);
  }
  return r;
}

}  // namespace llmref::llm

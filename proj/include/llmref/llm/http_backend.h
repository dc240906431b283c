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

#ifndef LLMREF_LLM_HTTP_BACKEND_H_
#define LLMREF_LLM_HTTP_BACKEND_H_

#include <chrono>
#include <string>

#include "json.hpp"
#include "llmref/llm/backend.h"

namespace llmref::llm {

struct HttpOptions {
  // Scheme, host, optional port and path prefix, e.g. https://api.openai.com/v1
  std::string base_url = "https://api.openai.com/v1";
  // Environment variable holding the bearer token.
  std::string api_key_env = "OPENAI_API_KEY";
  bool require_api_key = true;
  bool supports_logprobs = true;
  std::chrono::seconds timeout{60};
};

// Speaks the OpenAI-compatible /completions and /chat/completions protocol.
class HttpBackend : public Backend {
 public:
  explicit HttpBackend(HttpOptions options);

  std::string id() const override { return "openai-compatible:" + options_.base_url; }
  bool supports_logprobs() const override { return options_.supports_logprobs; }
  LlmResponse complete(const LlmRequest& request) override;

  // Wire-format helpers, exposed for tests.
  static std::string endpoint(const LlmRequest& request);
  static nlohmann::json request_body(const LlmRequest& request);
  static LlmResponse parse_reply(const nlohmann::json& reply, const LlmRequest& request);

 private:
  HttpOptions options_;
  std::string scheme_host_port_;
  std::string path_prefix_;
  std::string api_key_;
};

}  // namespace llmref::llm

#endif  // LLMREF_LLM_HTTP_BACKEND_H_

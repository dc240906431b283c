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

#ifndef LLMREF_LLM_CLIENT_H_
#define LLMREF_LLM_CLIENT_H_

#include <atomic>
#include <chrono>
#include <functional>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "llmref/llm/backend.h"
#include "llmref/llm/budget.h"
#include "llmref/llm/cache.h"

namespace llmref::llm {

struct RetryPolicy {
  int max_attempts = 5;
  std::chrono::milliseconds initial_delay{1000};
  double multiplier = 2.0;
};

struct ClientOptions {
  std::string model_name = "mock-reference";
  bool chat = false;  // send generation prompts as a single user message
  RetryPolicy retry;
  size_t max_in_flight = 4;
  std::optional<double> budget_cap;  // abort before billing beyond this
  RateTable rates;
  // Injected for tests; defaults to std::this_thread::sleep_for.
  std::function<void(std::chrono::milliseconds)> sleep;
};

struct ClientStats {
  long requests = 0;
  long cache_hits = 0;
  long network_calls = 0;  // backend invocations, retries included
  long retries = 0;
};

// Cached, retrying, budget-tracking front end for a Backend. complete() may be
// called from several threads; at most max_in_flight backend calls run at once.
class LlmClient {
 public:
  LlmClient(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache,
            ClientOptions options = {});

  LlmResponse complete(LlmRequest request);

  // Temperature-0 request for `prompt` in the configured payload style.
  LlmRequest make_request(std::string prompt) const;

  Backend& backend() { return *backend_; }
  const ClientOptions& options() const { return options_; }
  const std::string& model_name() const { return options_.model_name; }
  const Budget& budget() const { return budget_; }
  ClientStats stats() const;

 private:
  LlmResponse call_with_retry(const LlmRequest& request);

  std::shared_ptr<Backend> backend_;
  std::shared_ptr<ResponseCache> cache_;
  ClientOptions options_;
  Budget budget_;
  std::counting_semaphore<1024> in_flight_;
  std::atomic<long> requests_{0};
  std::atomic<long> cache_hits_{0};
  std::atomic<long> network_calls_{0};
  std::atomic<long> retries_{0};
};

// Per-token log-probabilities the reference model assigns to `continuation`
// after `context`, context tokens excluded. Throws LlmError(kCapability) when
// the backend has no log-probability access.
std::vector<double> score_continuation(LlmClient& client, std::string_view context,
                                       std::string_view continuation);

// Temperature-0 zero-shot summary of `article`, whitespace-trimmed.
std::string generate_quasi_reference(LlmClient& client, std::string_view article);

}  // namespace llmref::llm

#endif  // LLMREF_LLM_CLIENT_H_

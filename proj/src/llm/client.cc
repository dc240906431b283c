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

#include "llmref/llm/client.h"

#include <thread>

#include "llmref/llm/prompts.h"
#include "llmref/util/log.h"
#include "llmref/util/text.h"

namespace llmref::llm {

LlmClient::LlmClient(std::shared_ptr<Backend> backend, std::shared_ptr<ResponseCache> cache,
                     ClientOptions options)
    : backend_(std::move(backend)),
      cache_(cache ? std::move(cache) : std::make_shared<ResponseCache>()),
      options_(std::move(options)),
      budget_(options_.rates),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<size_t>(1, options_.max_in_flight))) {
  if (!backend_) throw std::invalid_argument("LlmClient needs a backend");
  if (!options_.sleep) {
    options_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  }
}

LlmRequest LlmClient::make_request(std::string prompt) const {
  LlmRequest req;
  req.model_name = options_.model_name;
  req.temperature = 0.0;
  if (options_.chat) {
    req.messages.push_back({"user", std::move(prompt)});
  } else {
    req.prompt = std::move(prompt);
  }
  return req;
}

LlmResponse LlmClient::complete(LlmRequest request) {
  if (request.model_name.empty()) request.model_name = options_.model_name;
  request.validate();
  ++requests_;
  const std::string key = ResponseCache::key(backend_->id(), request);
  if (auto hit = cache_->get(key)) {
    ++cache_hits_;
    hit->cached = true;
    budget_.record(request.model_name, hit->usage, /*fresh=*/false);
    return *hit;
  }
  if (options_.budget_cap && budget_.billed() >= *options_.budget_cap) {
    throw LlmError(LlmError::Kind::kBudgetExceeded,
                   "budget cap of " + std::to_string(*options_.budget_cap) + " reached");
  }
  LlmResponse resp = call_with_retry(request);
  if (request.want_logprobs && !resp.token_logprobs) {
    throw LlmError(LlmError::Kind::kMalformedReply,
                   "backend returned no log-probabilities");
  }
  if (resp.token_logprobs) {
    for (const auto& t : *resp.token_logprobs) {
      if (!(t.logprob <= 0.0)) {
        throw LlmError(LlmError::Kind::kMalformedReply,
                       "backend returned a positive log-probability");
      }
    }
  }
  cache_->put(key, backend_->id(), request, resp);
  budget_.record(request.model_name, resp.usage, /*fresh=*/true);
  resp.cached = false;
  return resp;
}

LlmResponse LlmClient::call_with_retry(const LlmRequest& request) {
  const auto& policy = options_.retry;
  auto delay = policy.initial_delay;
  for (int attempt = 1;; ++attempt) {
    try {
      in_flight_.acquire();
      struct Release {
        std::counting_semaphore<1024>& s;
        ~Release() { s.release(); }
      } release{in_flight_};
      ++network_calls_;
      return backend_->complete(request);
    } catch (const LlmError& e) {
      if (!e.retryable() || attempt >= policy.max_attempts) throw;
      ++retries_;
      log::warn("llm request failed (" + std::string(to_string(e.kind())) + "): " +
                e.what() + "; retry " + std::to_string(attempt) + " of " +
                std::to_string(policy.max_attempts - 1));
      options_.sleep(delay);
      delay = std::chrono::milliseconds(
          static_cast<long>(static_cast<double>(delay.count()) * policy.multiplier));
    }
  }
}

ClientStats LlmClient::stats() const {
  return {requests_.load(), cache_hits_.load(), network_calls_.load(), retries_.load()};
}

std::vector<double> score_continuation(LlmClient& client, std::string_view context,
                                       std::string_view continuation) {
  if (!client.backend().supports_logprobs()) {
    throw LlmError(LlmError::Kind::kCapability,
                   "backend '" + client.backend().id() +
                       "' does not expose log-probabilities; use GPTRank instead of "
                       "GPTScore");
  }
  if (text::trim(continuation).empty()) return {};
  LlmRequest req;
  req.model_name = client.model_name();
  req.prompt = std::string(context) + std::string(continuation);
  req.temperature = 0.0;
  req.max_tokens = 0;
  req.want_logprobs = true;
  req.echo = true;
  const auto resp = client.complete(req);
  std::vector<double> out;
  for (const auto& t : *resp.token_logprobs) {
    if (t.offset >= context.size()) out.push_back(t.logprob);
  }
  return out;
}

std::string generate_quasi_reference(LlmClient& client, std::string_view article) {
  if (text::trim(article).empty()) {
    throw LlmError(LlmError::Kind::kInvalidRequest, "article is empty");
  }
  const auto resp = client.complete(client.make_request(render_generation_prompt(article)));
  return std::string(text::trim(resp.text));
}

}  // namespace llmref::llm

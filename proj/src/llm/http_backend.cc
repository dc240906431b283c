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

#include "llmref/llm/http_backend.h"

#include <cstdlib>

#include "httplib.h"

namespace llmref::llm {

using nlohmann::json;
using K = LlmError::Kind;

HttpBackend::HttpBackend(HttpOptions options) : options_(std::move(options)) {
  const std::string& url = options_.base_url;
  const size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw LlmError(K::kInvalidRequest, "base URL needs a scheme: " + url);
  }
  const size_t path_start = url.find('/', scheme_end + 3);
  scheme_host_port_ = url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "" : url.substr(path_start);
  while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
  if (const char* key = std::getenv(options_.api_key_env.c_str())) api_key_ = key;
}

std::string HttpBackend::endpoint(const LlmRequest& request) {
  return request.chat() ? "/chat/completions" : "/completions";
}

json HttpBackend::request_body(const LlmRequest& request) {
  json body = {{"model", request.model_name},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  if (request.chat()) {
    json msgs = json::array();
    for (const auto& m : request.messages) {
      msgs.push_back({{"role", m.role}, {"content", m.content}});
    }
    body["messages"] = std::move(msgs);
    if (request.want_logprobs) body["logprobs"] = true;
  } else {
    body["prompt"] = request.prompt;
    if (request.echo) body["echo"] = true;
    if (request.want_logprobs) body["logprobs"] = 0;
  }
  return body;
}

LlmResponse HttpBackend::parse_reply(const json& reply, const LlmRequest& request) {
  LlmResponse resp;
  try {
    const auto& choice = reply.at("choices").at(0);
    if (request.chat()) {
      resp.text = choice.at("message").at("content").get<std::string>();
      if (request.want_logprobs && choice.contains("logprobs") &&
          !choice["logprobs"].is_null()) {
        std::vector<TokenLogProb> toks;
        size_t offset = request.text().size();
        for (const auto& t : choice["logprobs"].at("content")) {
          const auto tok = t.at("token").get<std::string>();
          toks.push_back({tok, t.at("logprob").get<double>(), offset});
          offset += tok.size();
        }
        resp.token_logprobs = std::move(toks);
      }
    } else {
      resp.text = choice.at("text").get<std::string>();
      if (request.echo && resp.text.rfind(request.prompt, 0) == 0) {
        resp.text.erase(0, request.prompt.size());
      }
      if (request.want_logprobs) {
        const auto& lp = choice.at("logprobs");
        const auto& tokens = lp.at("tokens");
        const auto& values = lp.at("token_logprobs");
        const auto& offsets = lp.at("text_offset");
        if (tokens.size() != values.size() || tokens.size() != offsets.size()) {
          throw LlmError(K::kMalformedReply, "logprob arrays differ in length");
        }
        std::vector<TokenLogProb> toks;
        for (size_t i = 0; i < tokens.size(); ++i) {
          // The first echoed token has no conditional probability (null).
          const double v = values[i].is_null() ? 0.0 : values[i].get<double>();
          toks.push_back({tokens[i].get<std::string>(), v, offsets[i].get<size_t>()});
        }
        resp.token_logprobs = std::move(toks);
      }
    }
    if (reply.contains("usage") && !reply["usage"].is_null()) {
      resp.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
      resp.usage.completion_tokens = reply["usage"].value("completion_tokens", 0);
    }
  } catch (const json::exception& e) {
    throw LlmError(K::kMalformedReply, std::string("unexpected reply shape: ") + e.what());
  }
  return resp;
}

LlmResponse HttpBackend::complete(const LlmRequest& request) {
  request.validate();
  if (options_.require_api_key && api_key_.empty()) {
    throw LlmError(K::kCredentials,
                   "environment variable " + options_.api_key_env + " is not set");
  }
  if (request.echo && !options_.supports_logprobs) {
    throw LlmError(K::kCapability, "endpoint does not expose log-probabilities");
  }
  httplib::Client cli(scheme_host_port_);
  cli.set_connection_timeout(options_.timeout);
  cli.set_read_timeout(options_.timeout);
  cli.set_write_timeout(options_.timeout);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  const auto res = cli.Post(path_prefix_ + endpoint(request), headers,
                            request_body(request).dump(), "application/json");
  if (!res) {
    throw LlmError(K::kNetwork, "request to " + options_.base_url +
                                    " failed: " + httplib::to_string(res.error()));
  }
  if (res->status == 429) throw LlmError(K::kRateLimited, "rate limited (HTTP 429)");
  if (res->status >= 500) {
    throw LlmError(K::kNetwork, "server error (HTTP " + std::to_string(res->status) + ")");
  }
  if (res->status != 200) {
    throw LlmError(K::kHttp, "HTTP " + std::to_string(res->status) + ": " +
                                 res->body.substr(0, 512));
  }
  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::parse_error& e) {
    throw LlmError(K::kMalformedReply, std::string("reply is not JSON: ") + e.what());
  }
  return parse_reply(reply, request);
}

}  // namespace llmref::llm

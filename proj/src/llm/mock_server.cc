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

#include "llmref/llm/mock_server.h"

#include "httplib.h"

namespace llmref::llm {

using nlohmann::json;

namespace {

LlmRequest request_from_body(const json& body, bool chat) {
  LlmRequest req;
  req.model_name = body.value("model", "");
  req.temperature = body.value("temperature", 0.0);
  req.max_tokens = body.value("max_tokens", 16);
  if (chat) {
    for (const auto& m : body.at("messages")) {
      req.messages.push_back({m.at("role"), m.at("content")});
    }
    req.want_logprobs = body.value("logprobs", false);
  } else {
    req.prompt = body.at("prompt").get<std::string>();
    req.echo = body.value("echo", false);
    req.want_logprobs = body.contains("logprobs") && !body["logprobs"].is_null();
  }
  return req;
}

json completion_reply(const LlmRequest& req, const LlmResponse& resp) {
  json choice = {{"index", 0}, {"finish_reason", "stop"}};
  choice["text"] = req.echo ? req.prompt + resp.text : resp.text;
  if (resp.token_logprobs) {
    json tokens = json::array(), values = json::array(), offsets = json::array();
    for (size_t i = 0; i < resp.token_logprobs->size(); ++i) {
      const auto& t = (*resp.token_logprobs)[i];
      tokens.push_back(t.token);
      if (req.echo && i == 0) {
        values.push_back(nullptr);
      } else {
        values.push_back(t.logprob);
      }
      offsets.push_back(t.offset);
    }
    choice["logprobs"] = {{"tokens", tokens}, {"token_logprobs", values},
                          {"text_offset", offsets}};
  } else {
    choice["logprobs"] = nullptr;
  }
  return {{"object", "text_completion"},
          {"model", req.model_name},
          {"choices", json::array({choice})},
          {"usage",
           {{"prompt_tokens", resp.usage.prompt_tokens},
            {"completion_tokens", resp.usage.completion_tokens},
            {"total_tokens", resp.usage.total()}}}};
}

json chat_reply(const LlmRequest& req, const LlmResponse& resp) {
  json choice = {{"index", 0},
                 {"finish_reason", "stop"},
                 {"message", {{"role", "assistant"}, {"content", resp.text}}}};
  if (resp.token_logprobs) {
    json content = json::array();
    for (const auto& t : *resp.token_logprobs) {
      content.push_back({{"token", t.token}, {"logprob", t.logprob}});
    }
    choice["logprobs"] = {{"content", content}};
  }
  return {{"object", "chat.completion"},
          {"model", req.model_name},
          {"choices", json::array({choice})},
          {"usage",
           {{"prompt_tokens", resp.usage.prompt_tokens},
            {"completion_tokens", resp.usage.completion_tokens},
            {"total_tokens", resp.usage.total()}}}};
}

}  // namespace

MockServer::MockServer(std::shared_ptr<MockBackend> backend)
    : backend_(std::move(backend)), server_(std::make_unique<httplib::Server>()) {
  auto handler = [this](bool chat) {
    return [this, chat](const httplib::Request& http_req, httplib::Response& http_res) {
      LlmRequest req;
      try {
        req = request_from_body(json::parse(http_req.body), chat);
      } catch (const std::exception& e) {
        http_res.status = 400;
        http_res.set_content(json{{"error", {{"message", e.what()}}}}.dump(),
                             "application/json");
        return;
      }
      try {
        const auto resp = backend_->complete(req);
        const json reply = chat ? chat_reply(req, resp) : completion_reply(req, resp);
        http_res.set_content(reply.dump(), "application/json");
      } catch (const LlmError& e) {
        switch (e.kind()) {
          case LlmError::Kind::kRateLimited:
            http_res.status = 429;
            break;
          case LlmError::Kind::kNetwork:
            http_res.status = 503;
            break;
          case LlmError::Kind::kMalformedReply:
            http_res.status = 200;
            http_res.set_content("<html>not json</html>", "text/html");
            return;
          default:
            http_res.status = 400;
            break;
        }
        http_res.set_content(json{{"error", {{"message", e.what()}}}}.dump(),
                             "application/json");
      }
    };
  };
  server_->Post("/v1/completions", handler(false));
  server_->Post("/v1/chat/completions", handler(true));
}

MockServer::~MockServer() { stop(); }

int MockServer::start(int port) {
  if (port == 0) {
    port_ = server_->bind_to_any_port("127.0.0.1");
  } else {
    port_ = server_->bind_to_port("127.0.0.1", port) ? port : -1;
  }
  if (port_ <= 0) throw std::runtime_error("mock server could not bind a port");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
  return port_;
}

void MockServer::stop() {
  if (server_) server_->stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace llmref::llm

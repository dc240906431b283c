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

#ifndef LLMREF_LLM_MOCK_SERVER_H_
#define LLMREF_LLM_MOCK_SERVER_H_

#include <memory>
#include <thread>

#include "llmref/llm/mock_backend.h"

namespace httplib {
class Server;
}

namespace llmref::llm {

// Serves a MockBackend over the OpenAI-compatible HTTP protocol on
// 127.0.0.1, so HttpBackend can be exercised end to end offline. Injected
// mock faults map to HTTP 503 (network), 429 (rate limit) and a non-JSON body
// (malformed).
class MockServer {
 public:
  explicit MockServer(std::shared_ptr<MockBackend> backend);
  ~MockServer();

  MockServer(const MockServer&) = delete;
  MockServer& operator=(const MockServer&) = delete;

  // Binds an ephemeral port (or `port` when non-zero) and starts serving.
  int start(int port = 0);
  void stop();
  int port() const { return port_; }

 private:
  std::shared_ptr<MockBackend> backend_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
  int port_ = 0;
};

}  // namespace llmref::llm

#endif  // LLMREF_LLM_MOCK_SERVER_H_

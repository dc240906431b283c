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

#ifndef LLMREF_LLM_BACKEND_H_
#define LLMREF_LLM_BACKEND_H_

#include <string>

#include "llmref/llm/types.h"

namespace llmref::llm {

// A reference-LLM endpoint. Implementations must be safe to call from several
// threads at once.
class Backend {
 public:
  virtual ~Backend() = default;

  // Stable identifier; part of every cache key.
  virtual std::string id() const = 0;
  // Whether echo/logprob scoring is available.
  virtual bool supports_logprobs() const = 0;
  // One attempt. Throws LlmError on failure; retrying is the client's job.
  virtual LlmResponse complete(const LlmRequest& request) = 0;
};

}  // namespace llmref::llm

#endif  // LLMREF_LLM_BACKEND_H_

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

#ifndef LLMREF_LLM_CACHE_H_
#define LLMREF_LLM_CACHE_H_

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "llmref/llm/types.h"

namespace llmref::llm {

// Content-addressed response store. On disk:
//   <dir>/index.jsonl              one line per stored response
//   <dir>/responses/<k0k1>/<k>.json  {key, backend, request, response}
// where k is the SHA-256 of the backend id and the canonical request payload.
// Safe for concurrent use within one process.
class ResponseCache {
 public:
  struct IndexEntry {
    std::string key;
    std::string backend;
    std::string model;
    Usage usage;
  };

  // In-memory only.
  ResponseCache() = default;
  explicit ResponseCache(std::filesystem::path dir);

  static std::string key(const std::string& backend_id, const LlmRequest& request);

  std::optional<LlmResponse> get(const std::string& key);
  void put(const std::string& key, const std::string& backend_id,
           const LlmRequest& request, const LlmResponse& response);
  size_t size() const;
  const std::optional<std::filesystem::path>& dir() const { return dir_; }

  static std::vector<IndexEntry> read_index(const std::filesystem::path& dir);

 private:
  std::filesystem::path entry_path(const std::string& key) const;

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, LlmResponse> memory_;
};

}  // namespace llmref::llm

#endif  // LLMREF_LLM_CACHE_H_

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

#include "llmref/llm/cache.h"

#include <fstream>

#include "llmref/util/hash.h"

namespace llmref::llm {

namespace fs = std::filesystem;

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(*dir_ / "responses");
}

std::string ResponseCache::key(const std::string& backend_id, const LlmRequest& request) {
  const nlohmann::json material = {{"backend", backend_id},
                                   {"model", request.model_name},
                                   {"request", request.payload()}};
  return sha256_hex(material.dump());
}

fs::path ResponseCache::entry_path(const std::string& key) const {
  return *dir_ / "responses" / key.substr(0, 2) / (key + ".json");
}

std::optional<LlmResponse> ResponseCache::get(const std::string& key) {
  std::lock_guard lock(mu_);
  if (auto it = memory_.find(key); it != memory_.end()) return it->second;
  if (!dir_) return std::nullopt;
  const fs::path path = entry_path(key);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    const auto j = nlohmann::json::parse(in);
    auto resp = LlmResponse::from_json(j.at("response"));
    memory_.emplace(key, resp);
    return resp;
  } catch (const nlohmann::json::exception&) {
    // A torn write is treated as a miss and overwritten later.
    return std::nullopt;
  }
}

void ResponseCache::put(const std::string& key, const std::string& backend_id,
                        const LlmRequest& request, const LlmResponse& response) {
  std::lock_guard lock(mu_);
  LlmResponse stored = response;
  stored.cached = false;
  memory_[key] = stored;
  if (!dir_) return;
  const fs::path path = entry_path(key);
  fs::create_directories(path.parent_path());
  const nlohmann::json entry = {{"key", key},
                                {"backend", backend_id},
                                {"request", request.payload()},
                                {"response", stored.to_json()}};
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write cache entry " + tmp.string());
    out << entry.dump() << '\n';
  }
  fs::rename(tmp, path);
  std::ofstream index(*dir_ / "index.jsonl", std::ios::app);
  const nlohmann::json line = {{"key", key},
                               {"backend", backend_id},
                               {"model", request.model_name},
                               {"prompt_tokens", response.usage.prompt_tokens},
                               {"completion_tokens", response.usage.completion_tokens}};
  index << line.dump() << '\n';
}

size_t ResponseCache::size() const {
  std::lock_guard lock(mu_);
  return memory_.size();
}

std::vector<ResponseCache::IndexEntry> ResponseCache::read_index(const fs::path& dir) {
  std::vector<IndexEntry> out;
  std::ifstream in(dir / "index.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      out.push_back({j.at("key"), j.at("backend"), j.at("model"),
                     Usage{j.at("prompt_tokens"), j.at("completion_tokens")}});
    } catch (const nlohmann::json::exception&) {
      continue;
    }
  }
  return out;
}

}  // namespace llmref::llm

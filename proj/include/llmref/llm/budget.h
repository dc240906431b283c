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

#ifndef LLMREF_LLM_BUDGET_H_
#define LLMREF_LLM_BUDGET_H_

#include <map>
#include <mutex>
#include <string>

#include "json.hpp"
#include "llmref/llm/types.h"

namespace llmref::llm {

// Price per 1K tokens (prompt and completion alike), by model name.
struct RateTable {
  std::map<std::string, double> per_1k;
  double default_per_1k = 0.0;

  double rate(const std::string& model) const;
  static RateTable from_json(const nlohmann::json& j);
};

// Token tallies and spend. spent() always equals the sum over models of
// tokens * rate / 1000, so it never decreases. Thread-safe.
class Budget {
 public:
  struct Tally {
    int64_t prompt_tokens = 0;
    int64_t completion_tokens = 0;
    int64_t requests = 0;
    int64_t fresh_tokens = 0;  // tokens of responses not served from cache

    bool operator==(const Tally&) const = default;
  };

  explicit Budget(RateTable rates = {}) : rates_(std::move(rates)) {}

  // Every served response counts toward spent(); only fresh ones toward
  // billed().
  void record(const std::string& model, const Usage& usage, bool fresh);

  double spent() const;
  double billed() const;
  std::map<std::string, Tally> tallies() const;
  const RateTable& rates() const { return rates_; }
  nlohmann::json report() const;

 private:
  RateTable rates_;
  mutable std::mutex mu_;
  std::map<std::string, Tally> tallies_;
};

}  // namespace llmref::llm

#endif  // LLMREF_LLM_BUDGET_H_

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

#include "llmref/llm/budget.h"

namespace llmref::llm {

double RateTable::rate(const std::string& model) const {
  auto it = per_1k.find(model);
  return it == per_1k.end() ? default_per_1k : it->second;
}

RateTable RateTable::from_json(const nlohmann::json& j) {
  RateTable t;
  if (j.contains("default")) t.default_per_1k = j["default"].get<double>();
  if (j.contains("models")) {
    for (auto& [model, rate] : j["models"].items()) t.per_1k[model] = rate.get<double>();
  }
  return t;
}

void Budget::record(const std::string& model, const Usage& usage, bool fresh) {
  std::lock_guard lock(mu_);
  auto& t = tallies_[model];
  t.prompt_tokens += usage.prompt_tokens;
  t.completion_tokens += usage.completion_tokens;
  t.requests += 1;
  if (fresh) t.fresh_tokens += usage.total();
}

double Budget::spent() const {
  std::lock_guard lock(mu_);
  double total = 0.0;
  for (const auto& [model, t] : tallies_) {
    total += static_cast<double>(t.prompt_tokens + t.completion_tokens) *
             rates_.rate(model) / 1000.0;
  }
  return total;
}

double Budget::billed() const {
  std::lock_guard lock(mu_);
  double total = 0.0;
  for (const auto& [model, t] : tallies_) {
    total += static_cast<double>(t.fresh_tokens) * rates_.rate(model) / 1000.0;
  }
  return total;
}

std::map<std::string, Budget::Tally> Budget::tallies() const {
  std::lock_guard lock(mu_);
  return tallies_;
}

nlohmann::json Budget::report() const {
  nlohmann::json models = nlohmann::json::object();
  for (const auto& [model, t] : tallies()) {
    models[model] = {{"prompt_tokens", t.prompt_tokens},
                     {"completion_tokens", t.completion_tokens},
                     {"requests", t.requests},
                     {"fresh_tokens", t.fresh_tokens},
                     {"rate_per_1k", rates_.rate(model)},
                     {"cost", static_cast<double>(t.prompt_tokens + t.completion_tokens) *
                                  rates_.rate(model) / 1000.0}};
  }
  return {{"models", models}, {"spent", spent()}, {"billed", billed()}};
}

}  // namespace llmref::llm

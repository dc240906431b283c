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

#include "llmref/llm/prompts.h"

namespace llmref::llm {

namespace {
constexpr std::string_view kItemLine = "{{i}}. {{Summary i}}";
}  // namespace

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  size_t pos = 0;
  while (pos < tmpl.size()) {
    const size_t open = tmpl.find("{{", pos);
    if (open == std::string_view::npos) break;
    const size_t close = tmpl.find("}}", open + 2);
    if (close == std::string_view::npos) break;
    out.append(tmpl.substr(pos, open - pos));
    const std::string name(tmpl.substr(open + 2, close - open - 2));
    auto it = values.find(name);
    if (it != values.end()) {
      out += it->second;
    } else {
      out.append(tmpl.substr(open, close + 2 - open));
    }
    pos = close + 2;
  }
  out.append(tmpl.substr(pos));
  return out;
}

std::string render_generation_prompt(std::string_view article) {
  return render_template(assets::kGenerateV1, {{"Article", std::string(article)}});
}

std::string render_listwise_prompt(std::string_view article,
                                   const std::vector<std::string>& candidates) {
  const std::string_view tmpl = assets::kListwiseV1;
  const size_t item = tmpl.find(kItemLine);
  std::string items;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (i) items += "\n\n";
    items += std::to_string(i + 1) + ". " + candidates[i];
  }
  std::string expanded(tmpl.substr(0, item));
  expanded += "{{Items}}";
  expanded.append(tmpl.substr(item + kItemLine.size()));
  return render_template(expanded, {{"Article", std::string(article)}, {"Items", items}});
}

std::string render_pairwise_prompt(std::string_view article, std::string_view summary1,
                                   std::string_view summary2) {
  return render_template(assets::kPairwiseV1, {{"Article", std::string(article)},
                                               {"Summary 1", std::string(summary1)},
                                               {"Summary 2", std::string(summary2)}});
}

}  // namespace llmref::llm

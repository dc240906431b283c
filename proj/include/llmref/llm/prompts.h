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

#ifndef LLMREF_LLM_PROMPTS_H_
#define LLMREF_LLM_PROMPTS_H_

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace llmref::llm {

namespace assets {
// Versioned template assets (assets/prompts/*.txt), embedded at build time.
extern const std::string_view kGenerateV1;
extern const std::string_view kListwiseV1;
extern const std::string_view kPairwiseV1;
}  // namespace assets

// Single pass: replaces every "{{Name}}" with values.at("Name"); substituted
// text is never rescanned. Unknown placeholders are left as they are.
std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values);

// Zero-shot summarisation prompt; also the GPTScore conditioning context.
std::string render_generation_prompt(std::string_view article);

// List-wise ranking prompt. The "{{i}}. {{Summary i}}" line of the template is
// repeated once per candidate, items separated by a blank line.
std::string render_listwise_prompt(std::string_view article,
                                   const std::vector<std::string>& candidates);

std::string render_pairwise_prompt(std::string_view article, std::string_view summary1,
                                   std::string_view summary2);

}  // namespace llmref::llm

#endif  // LLMREF_LLM_PROMPTS_H_

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

#include "llmref/llm/mock_backend.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <vector>

#include "llmref/eval/rouge.h"
#include "llmref/util/text.h"

namespace llmref::llm {

namespace mock {

std::string lead_summary(std::string_view article) {
  return text::lead_sentences(article, 3);
}

double quality(std::string_view article, std::string_view candidate) {
  return eval::ngram_overlap(candidate, lead_summary(article), 1).recall();
}

double token_logprob(std::string_view article, std::string_view candidate) {
  return std::log(kQualityFloor + (1.0 - kQualityFloor) * quality(article, candidate));
}

}  // namespace mock

namespace {

constexpr std::string_view kGenArticle = "Article: ";
constexpr std::string_view kGenInstruction =
    "\n\nSummarize the above article in three sentences.";
constexpr std::string_view kGenAnswer = "\n\nSummary:";
constexpr std::string_view kListMarker = "rank the summaries in descending order";
constexpr std::string_view kListArticle = "Article:\n";
constexpr std::string_view kListItems = "\n\nSummaries:\n\n";
constexpr std::string_view kPairMarker = "(there can be a tie)";
constexpr std::string_view kPairArticle = "Here's the article:\n\n";
constexpr std::string_view kPairFirst = "\n\nSummary 1:\n\n";
constexpr std::string_view kPairSecond = "\n\nSummary 2:\n\n";

// Text between `open` and `close` (first occurrences after `from`).
std::optional<std::string> between(std::string_view s, std::string_view open,
                                   std::string_view close, size_t from = 0) {
  const size_t a = s.find(open, from);
  if (a == std::string_view::npos) return std::nullopt;
  const size_t b = s.find(close, a + open.size());
  if (b == std::string_view::npos) return std::nullopt;
  return std::string(s.substr(a + open.size(), b - a - open.size()));
}

struct Token {
  std::string text;
  size_t offset;
};

std::vector<Token> whitespace_tokens(std::string_view s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back({std::string(s.substr(i, j - i)), i});
    i = j;
  }
  return out;
}

std::string rank_response(const std::string& article, const std::vector<std::string>& items) {
  std::vector<double> q;
  for (const auto& s : items) q.push_back(mock::quality(article, s));
  std::vector<size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return q[a] > q[b]; });
  std::string ranking;
  for (size_t i = 0; i < order.size(); ++i) {
    if (i) ranking += ", ";
    ranking += std::to_string(order[i] + 1);
  }
  return "Explanation: Summaries that recover more of the article's opening "
         "sentences rank higher.\nRanking: " +
         ranking;
}

std::string pair_response(const std::string& article, const std::string& s1,
                          const std::string& s2) {
  const double q1 = mock::quality(article, s1);
  const double q2 = mock::quality(article, s2);
  const char* decision = q1 > q2 ? "1" : q2 > q1 ? "2" : "tie";
  return std::string("Explanation: Compared coverage of the article's opening "
                     "sentences.\nDecision: ") +
         decision;
}

}  // namespace

void MockBackend::set_responder(Responder responder) {
  std::lock_guard lock(responder_mu_);
  responder_ = std::move(responder);
}

LlmResponse MockBackend::complete(const LlmRequest& request) {
  using K = LlmError::Kind;
  const long index = calls_.fetch_add(1);
  if (index < options_.fail_network_first) {
    throw LlmError(K::kNetwork, "mock: injected connection failure");
  }
  if (index < options_.fail_network_first + options_.rate_limit_first) {
    throw LlmError(K::kRateLimited, "mock: injected rate limit");
  }
  if (index <
      options_.fail_network_first + options_.rate_limit_first + options_.malformed_first) {
    throw LlmError(K::kMalformedReply, "mock: injected malformed reply");
  }
  request.validate();
  if (request.echo) {
    if (!options_.supports_logprobs) {
      throw LlmError(K::kCapability, "mock: log-probabilities disabled");
    }
    return score(request);
  }

  const std::string prompt = request.text();
  std::optional<std::string> override_text;
  {
    std::lock_guard lock(responder_mu_);
    if (responder_) override_text = responder_(request, index);
  }
  LlmResponse resp;
  resp.text = override_text ? *override_text : generate(prompt);
  const auto prompt_tokens = whitespace_tokens(prompt);
  const auto completion = whitespace_tokens(resp.text);
  resp.usage = {static_cast<int64_t>(prompt_tokens.size()),
                static_cast<int64_t>(completion.size())};
  if (request.want_logprobs && options_.supports_logprobs) {
    std::vector<TokenLogProb> toks;
    for (const auto& t : completion) {
      toks.push_back({t.text, 0.0, prompt.size() + t.offset});
    }
    resp.token_logprobs = std::move(toks);
  }
  return resp;
}

LlmResponse MockBackend::score(const LlmRequest& request) const {
  const std::string& prompt = request.prompt;
  size_t cont_start = prompt.size();
  std::string article;
  if (prompt.rfind(kGenArticle, 0) == 0) {
    const size_t instr = prompt.find(kGenInstruction);
    const size_t answer =
        instr == std::string::npos ? std::string::npos : prompt.find(kGenAnswer, instr);
    if (answer != std::string::npos) {
      article = prompt.substr(kGenArticle.size(), instr - kGenArticle.size());
      cont_start = answer + kGenAnswer.size();
    }
  }
  const std::string continuation = prompt.substr(cont_start);
  const double cont_lp = mock::token_logprob(article, continuation);

  LlmResponse resp;
  std::vector<TokenLogProb> toks;
  for (const auto& t : whitespace_tokens(prompt)) {
    toks.push_back({t.text, t.offset >= cont_start ? cont_lp : mock::kContextLogProb,
                    t.offset});
  }
  resp.usage = {static_cast<int64_t>(toks.size()), 0};
  resp.token_logprobs = std::move(toks);
  return resp;
}

std::string MockBackend::generate(const std::string& prompt) const {
  if (prompt.find(kListMarker) != std::string::npos) {
    const auto article = between(prompt, kListArticle, kListItems);
    const size_t items_at = prompt.find(kListItems);
    if (article && items_at != std::string::npos) {
      std::vector<std::string> items;
      std::string_view rest(prompt);
      rest.remove_prefix(items_at + kListItems.size());
      size_t pos = 0;
      while (pos <= rest.size()) {
        size_t end = rest.find("\n\n", pos);
        if (end == std::string_view::npos) end = rest.size();
        std::string_view item = rest.substr(pos, end - pos);
        const size_t dot = item.find(". ");
        if (dot != std::string_view::npos) item.remove_prefix(dot + 2);
        items.emplace_back(item);
        pos = end + 2;
      }
      return rank_response(*article, items);
    }
  }
  if (prompt.find(kPairMarker) != std::string::npos) {
    const auto article = between(prompt, kPairArticle, kPairFirst);
    const auto s1 = between(prompt, kPairFirst, kPairSecond);
    const size_t second = prompt.find(kPairSecond);
    if (article && s1 && second != std::string::npos) {
      return pair_response(*article, *s1, prompt.substr(second + kPairSecond.size()));
    }
  }
  if (prompt.rfind(kGenArticle, 0) == 0) {
    const size_t instr = prompt.find(kGenInstruction);
    if (instr != std::string::npos) {
      return " " + mock::lead_summary(
                       std::string_view(prompt).substr(kGenArticle.size(),
                                                       instr - kGenArticle.size()));
    }
  }
  return " " + mock::lead_summary(prompt);
}

}  // namespace llmref::llm

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

#include "llmref/eval/parsing.h"

#include <algorithm>
#include <cctype>
#include <optional>

#include "llmref/util/text.h"

namespace llmref::eval {

namespace {

using K = ParseError::Kind;

struct Line {
  std::string_view text;
  size_t begin;  // offset of the line in the full text
};

std::vector<Line> lines_of(std::string_view s) {
  std::vector<Line> out;
  size_t pos = 0;
  while (pos <= s.size()) {
    size_t end = s.find('\n', pos);
    if (end == std::string_view::npos) end = s.size();
    out.push_back({s.substr(pos, end - pos), pos});
    pos = end + 1;
  }
  return out;
}

std::string_view strip_emphasis(std::string_view s) {
  s = text::trim(s);
  while (!s.empty() && (s.front() == '*' || s.front() == '#' || s.front() == '_')) {
    s.remove_prefix(1);
  }
  return s;
}

// Value following `marker` on the first line that starts with it.
std::optional<std::pair<std::string_view, size_t>> marked_line(std::string_view s,
                                                               std::string_view marker) {
  for (const auto& line : lines_of(s)) {
    std::string_view body = strip_emphasis(line.text);
    if (text::starts_with_ci(body, marker)) {
      body.remove_prefix(marker.size());
      return std::make_pair(body, line.begin);
    }
  }
  return std::nullopt;
}

bool is_wrapper(char c) { return c == '"' || c == '\'' || c == '*' || c == '`'; }

std::string_view unwrap(std::string_view s) {
  s = text::trim(s);
  while (!s.empty() && is_wrapper(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_wrapper(s.back())) s.remove_suffix(1);
  return text::trim(s);
}

}  // namespace

std::string_view to_string(PairOutcome outcome) {
  switch (outcome) {
    case PairOutcome::kFirst:
      return "1";
    case PairOutcome::kSecond:
      return "2";
    case PairOutcome::kTie:
      return "tie";
  }
  return "tie";
}

Ranking parse_ranking(std::string_view text, int n) {
  const auto marked = marked_line(text, "Ranking:");
  if (!marked) throw ParseError(K::kMissingMarker, "no 'Ranking:' line in response");

  std::string_view value = unwrap(marked->first);
  if (!value.empty() && value.back() == '.') value.remove_suffix(1);
  if (!value.empty() && value.front() == '[' && value.back() == ']') {
    value = value.substr(1, value.size() - 2);
  }

  std::vector<int> perm;
  size_t pos = 0;
  while (pos <= value.size()) {
    size_t comma = value.find(',', pos);
    if (comma == std::string_view::npos) comma = value.size();
    const std::string_view entry = unwrap(value.substr(pos, comma - pos));
    if (entry.empty() || entry.size() > 6 ||
        !std::all_of(entry.begin(), entry.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
      throw ParseError(K::kInvalidEntry,
                       "ranking entry '" + std::string(entry) + "' is not an integer");
    }
    perm.push_back(std::stoi(std::string(entry)));
    pos = comma + 1;
  }
  if (static_cast<int>(perm.size()) != n) {
    throw ParseError(K::kWrongCount, "ranking has " + std::to_string(perm.size()) +
                                         " entries, expected " + std::to_string(n));
  }
  std::vector<bool> seen(n + 1, false);
  for (int v : perm) {
    if (v < 1 || v > n) {
      throw ParseError(K::kOutOfRange, "ranking entry " + std::to_string(v) +
                                           " outside 1.." + std::to_string(n));
    }
  }
  for (int v : perm) {
    if (seen[v]) {
      throw ParseError(K::kDuplicate, "ranking lists " + std::to_string(v) + " twice");
    }
    seen[v] = true;
  }

  Ranking out;
  out.permutation = std::move(perm);
  const std::string_view before = text.substr(0, marked->second);
  const size_t exp = text::find_ci(before, "Explanation:");
  out.explanation = std::string(
      exp == std::string_view::npos ? unwrap(before)
                                    : unwrap(before.substr(exp + 12)));
  return out;
}

std::string format_ranking(const Ranking& ranking) {
  std::string out = "Explanation: " + ranking.explanation + "\nRanking: ";
  for (size_t i = 0; i < ranking.permutation.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(ranking.permutation[i]);
  }
  return out;
}

PairDecision parse_decision(std::string_view text) {
  const auto marked = marked_line(text, "Decision:");
  if (!marked) throw ParseError(K::kMissingMarker, "no 'Decision:' line in response");
  std::string_view value = unwrap(marked->first);
  if (!value.empty() && value.back() == '.') value.remove_suffix(1);
  value = unwrap(value);
  const std::string v = text::to_lower(value);

  PairDecision out;
  if (v == "1") {
    out.outcome = PairOutcome::kFirst;
  } else if (v == "2") {
    out.outcome = PairOutcome::kSecond;
  } else if (v == "tie") {
    out.outcome = PairOutcome::kTie;
  } else {
    throw ParseError(K::kInvalidDecision,
                     "decision '" + std::string(value) + "' is not 1, 2 or tie");
  }
  const std::string_view before = text.substr(0, marked->second);
  const size_t exp = text::find_ci(before, "Explanation:");
  out.explanation = std::string(
      exp == std::string_view::npos ? unwrap(before) : unwrap(before.substr(exp + 12)));
  return out;
}

}  // namespace llmref::eval

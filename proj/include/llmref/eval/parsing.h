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

#ifndef LLMREF_EVAL_PARSING_H_
#define LLMREF_EVAL_PARSING_H_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace llmref::eval {

class ParseError : public std::runtime_error {
 public:
  enum class Kind {
    kMissingMarker,
    kInvalidEntry,   // a ranking entry that is not a plain integer
    kWrongCount,
    kOutOfRange,
    kDuplicate,
    kInvalidDecision,
  };

  ParseError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

struct Ranking {
  std::vector<int> permutation;  // 1-based candidate indices, best first
  std::string explanation;

  bool operator==(const Ranking&) const = default;
};

enum class PairOutcome { kFirst, kSecond, kTie };

struct PairDecision {
  PairOutcome outcome = PairOutcome::kTie;
  std::string explanation;

  bool operator==(const PairDecision&) const = default;
};

// Reads the first line that starts with "Ranking:" (case-insensitive, leading
// markdown emphasis ignored), splits it on commas and checks that it is a
// bijection on 1..n. The explanation is the text after "Explanation:" up to
// that line.
Ranking parse_ranking(std::string_view text, int n);

// Inverse of parse_ranking.
std::string format_ranking(const Ranking& ranking);

// Reads the first "Decision:" line. After trimming whitespace, surrounding
// quotes or asterisks and one trailing period, the value must be "1", "2" or
// "tie" (case-insensitive).
PairDecision parse_decision(std::string_view text);

std::string_view to_string(PairOutcome outcome);

}  // namespace llmref::eval

#endif  // LLMREF_EVAL_PARSING_H_

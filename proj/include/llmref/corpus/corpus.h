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

#ifndef LLMREF_CORPUS_CORPUS_H_
#define LLMREF_CORPUS_CORPUS_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace llmref::corpus {

class CorpusError : public std::runtime_error {
 public:
  enum class Kind {
    kMalformedLine,
    kDuplicateId,
    kMissingField,
    kInvalidCandidates,
    kMissingCandidates,
    kIo,
    kSplitTooLarge,
  };

  CorpusError(Kind kind, const std::string& what, size_t line = 0)
      : std::runtime_error(what), kind_(kind), line_(line) {}

  Kind kind() const { return kind_; }
  // 1-based line number for parse errors, 0 otherwise.
  size_t line() const { return line_; }

 private:
  Kind kind_;
  size_t line_;
};

// Which evaluator produced a candidate ordering.
enum class OrderSource { kGptScore, kGptRankList, kModelProb, kUnordered };

std::string_view to_string(OrderSource source);
OrderSource order_source_from_string(std::string_view s);

struct CandidateSet {
  std::vector<std::string> candidates;
  // 1-based candidate indices, best first. Absent iff source is kUnordered.
  std::optional<std::vector<int>> order;
  OrderSource order_source = OrderSource::kUnordered;
  // Optional per-candidate quality scores (same indexing as candidates).
  std::optional<std::vector<double>> scores;

  // Throws CorpusError(kInvalidCandidates) when an invariant is broken.
  void validate() const;

  // Candidate texts rearranged best-first. Requires an order.
  std::vector<std::string> ranked() const;

  bool operator==(const CandidateSet&) const = default;
};

struct Example {
  std::string id;
  std::string document;
  std::optional<std::string> reference;
  std::optional<CandidateSet> candidates;

  bool operator==(const Example&) const = default;
};

struct DatasetSplit {
  std::vector<Example> train;
  std::vector<Example> validation;
  std::vector<Example> test;
};

struct SplitSizes {
  size_t train = 0;
  size_t validation = 0;
  size_t test = 0;
};

enum class Format { kJsonl };

std::vector<Example> load_dataset(const std::filesystem::path& path,
                                  Format format = Format::kJsonl);

// Writes every example (with or without candidates).
void save_dataset(const std::filesystem::path& path,
                  const std::vector<Example>& examples);

// Same on-disk format as save_dataset, but every example must carry a
// candidate set.
void save_candidates(const std::filesystem::path& path,
                     const std::vector<Example>& examples);

// Seeded partition into disjoint train/validation/test subsets.
DatasetSplit make_splits(const std::vector<Example>& examples, SplitSizes sizes,
                         uint64_t seed);

// Record <-> JSON line, exposed for tools that stream.
std::string to_json_line(const Example& example);
Example from_json_line(std::string_view line, size_t line_number = 0);

}  // namespace llmref::corpus

#endif  // LLMREF_CORPUS_CORPUS_H_

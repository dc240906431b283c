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

#include "llmref/corpus/corpus.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "json.hpp"
#include "llmref/util/rng.h"

namespace llmref::corpus {

using nlohmann::json;

std::string_view to_string(OrderSource source) {
  switch (source) {
    case OrderSource::kGptScore:
      return "GPTScore";
    case OrderSource::kGptRankList:
      return "GPTRankList";
    case OrderSource::kModelProb:
      return "ModelProb";
    case OrderSource::kUnordered:
      return "Unordered";
  }
  return "Unordered";
}

OrderSource order_source_from_string(std::string_view s) {
  if (s == "GPTScore") return OrderSource::kGptScore;
  if (s == "GPTRankList") return OrderSource::kGptRankList;
  if (s == "ModelProb") return OrderSource::kModelProb;
  if (s == "Unordered") return OrderSource::kUnordered;
  throw CorpusError(CorpusError::Kind::kInvalidCandidates,
                    "unknown order_source '" + std::string(s) + "'");
}

void CandidateSet::validate() const {
  using K = CorpusError::Kind;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (candidates[i].empty()) {
      throw CorpusError(K::kInvalidCandidates,
                        "candidate " + std::to_string(i + 1) + " is empty");
    }
  }
  if (order.has_value() != (order_source != OrderSource::kUnordered)) {
    throw CorpusError(K::kInvalidCandidates,
                      "order must be present iff order_source is not Unordered");
  }
  if (order) {
    const size_t n = candidates.size();
    if (order->size() != n) {
      throw CorpusError(K::kInvalidCandidates,
                        "order length does not match candidate count");
    }
    std::vector<bool> seen(n, false);
    for (int idx : *order) {
      if (idx < 1 || static_cast<size_t>(idx) > n || seen[idx - 1]) {
        throw CorpusError(K::kInvalidCandidates,
                          "order is not a permutation of 1..n");
      }
      seen[idx - 1] = true;
    }
  }
  if (scores && scores->size() != candidates.size()) {
    throw CorpusError(K::kInvalidCandidates,
                      "scores do not cover all candidates");
  }
}

std::vector<std::string> CandidateSet::ranked() const {
  if (!order) {
    throw CorpusError(CorpusError::Kind::kInvalidCandidates,
                      "candidate set has no order");
  }
  std::vector<std::string> out;
  out.reserve(order->size());
  for (int idx : *order) out.push_back(candidates.at(idx - 1));
  return out;
}

std::string to_json_line(const Example& example) {
  json j;
  j["id"] = example.id;
  j["document"] = example.document;
  if (example.reference) j["reference"] = *example.reference;
  if (example.candidates) {
    const auto& c = *example.candidates;
    j["candidates"] = c.candidates;
    if (c.order) j["order"] = *c.order;
    j["order_source"] = std::string(to_string(c.order_source));
    if (c.scores) j["scores"] = *c.scores;
  }
  return j.dump();
}

Example from_json_line(std::string_view line, size_t line_number) {
  using K = CorpusError::Kind;
  const std::string where = "line " + std::to_string(line_number) + ": ";
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw CorpusError(K::kMalformedLine, where + "malformed record: " + e.what(),
                      line_number);
  }
  if (!j.is_object()) {
    throw CorpusError(K::kMalformedLine, where + "record is not an object",
                      line_number);
  }
  Example ex;
  try {
    if (!j.contains("id") || !j["id"].is_string()) {
      throw CorpusError(K::kMissingField, where + "missing id", line_number);
    }
    ex.id = j["id"].get<std::string>();
    if (!j.contains("document") || !j["document"].is_string()) {
      throw CorpusError(K::kMissingField,
                        where + "missing document field for id '" + ex.id + "'",
                        line_number);
    }
    ex.document = j["document"].get<std::string>();
    if (ex.document.empty()) {
      throw CorpusError(K::kMissingField,
                        where + "empty document for id '" + ex.id + "'",
                        line_number);
    }
    if (j.contains("reference") && !j["reference"].is_null()) {
      ex.reference = j["reference"].get<std::string>();
    }
    if (j.contains("candidates") && !j["candidates"].is_null()) {
      CandidateSet c;
      c.candidates = j["candidates"].get<std::vector<std::string>>();
      if (j.contains("order") && !j["order"].is_null()) {
        c.order = j["order"].get<std::vector<int>>();
      }
      c.order_source =
          j.contains("order_source")
              ? order_source_from_string(j["order_source"].get<std::string>())
              : OrderSource::kUnordered;
      if (j.contains("scores") && !j["scores"].is_null()) {
        c.scores = j["scores"].get<std::vector<double>>();
      }
      c.validate();
      ex.candidates = std::move(c);
    }
  } catch (const json::exception& e) {
    throw CorpusError(K::kMalformedLine, where + "bad field type: " + e.what(),
                      line_number);
  } catch (const CorpusError& e) {
    if (e.line() != 0) throw;
    throw CorpusError(e.kind(), where + e.what(), line_number);
  }
  return ex;
}

std::vector<Example> load_dataset(const std::filesystem::path& path,
                                  Format /*format*/) {
  std::ifstream in(path);
  if (!in) {
    throw CorpusError(CorpusError::Kind::kIo, "cannot open " + path.string());
  }
  std::vector<Example> out;
  std::unordered_set<std::string> ids;
  std::string line;
  size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Example ex = from_json_line(line, line_number);
    if (!ids.insert(ex.id).second) {
      throw CorpusError(CorpusError::Kind::kDuplicateId,
                        "line " + std::to_string(line_number) +
                            ": duplicate id '" + ex.id + "'",
                        line_number);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

void save_dataset(const std::filesystem::path& path,
                  const std::vector<Example>& examples) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw CorpusError(CorpusError::Kind::kIo, "cannot write " + path.string());
  }
  for (const auto& ex : examples) out << to_json_line(ex) << '\n';
  if (!out) {
    throw CorpusError(CorpusError::Kind::kIo, "write failed: " + path.string());
  }
}

void save_candidates(const std::filesystem::path& path,
                     const std::vector<Example>& examples) {
  for (const auto& ex : examples) {
    if (!ex.candidates) {
      throw CorpusError(CorpusError::Kind::kMissingCandidates,
                        "example '" + ex.id + "' has no candidate set");
    }
    ex.candidates->validate();
  }
  save_dataset(path, examples);
}

DatasetSplit make_splits(const std::vector<Example>& examples, SplitSizes sizes,
                         uint64_t seed) {
  const size_t total = sizes.train + sizes.validation + sizes.test;
  if (total > examples.size()) {
    throw CorpusError(CorpusError::Kind::kSplitTooLarge,
                      "requested " + std::to_string(total) + " examples but corpus has " +
                          std::to_string(examples.size()));
  }
  std::unordered_set<std::string> ids;
  for (const auto& ex : examples) {
    if (!ids.insert(ex.id).second) {
      throw CorpusError(CorpusError::Kind::kDuplicateId,
                        "duplicate id '" + ex.id + "'");
    }
  }
  std::vector<size_t> perm(examples.size());
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng(seed);
  rng.shuffle(perm);

  DatasetSplit split;
  size_t pos = 0;
  auto take = [&](size_t n, std::vector<Example>& dst) {
    dst.reserve(n);
    for (size_t i = 0; i < n; ++i) dst.push_back(examples[perm[pos++]]);
  };
  take(sizes.train, split.train);
  take(sizes.validation, split.validation);
  take(sizes.test, split.test);
  return split;
}

}  // namespace llmref::corpus

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

#include "llmref/pipeline/synthetic.h"

#include <array>
#include <cstdio>
#include <string>

#include "llmref/util/rng.h"

namespace llmref::pipeline {

namespace {

constexpr std::array kSubjects = {
    "the council", "the union",   "the museum",  "the hospital", "the airline",
    "the school",  "the court",   "the league",  "the company",  "the police",
    "the ministry", "the charity", "the bank",   "the port",     "the studio",
    "the library"};
constexpr std::array kActions = {"approved", "rejected", "announced", "delayed",
                                 "funded",   "reviewed", "cancelled", "expanded"};
constexpr std::array kObjects = {"plan",    "budget",  "project", "contract",
                                 "program", "report",  "merger",  "festival",
                                 "bridge",  "stadium", "tunnel",  "campaign"};
constexpr std::array kPlaces = {"london", "paris",  "boston", "madrid",
                                "dublin", "sydney", "lagos",  "denver"};
constexpr std::array kDays = {"monday", "tuesday", "wednesday", "thursday", "friday"};
constexpr std::array kReactions = {"welcomed", "criticised", "questioned", "praised"};
constexpr std::array kGroups = {"residents", "critics", "experts", "officials", "workers"};
constexpr std::array kFillers = {
    "the weather stayed mild for most of the week .",
    "local traffic was slower than usual .",
    "a spokesperson declined to give further details .",
    "the story is still developing .",
    "more updates are expected later .",
    "several people shared photos online ."};

template <typename A>
const char* pick(Rng& rng, const A& pool) {
  return pool[rng.uniform_index(pool.size())];
}

}  // namespace

std::vector<corpus::Example> generate_corpus(const SyntheticConfig& config) {
  Rng rng(config.seed);
  std::vector<corpus::Example> out;
  out.reserve(config.documents);
  const int filler_span = config.max_filler_sentences - config.min_filler_sentences + 1;
  for (size_t d = 0; d < config.documents; ++d) {
    const std::string subject = pick(rng, kSubjects);
    const std::string action = pick(rng, kActions);
    const std::string object = pick(rng, kObjects);
    const std::string place = pick(rng, kPlaces);
    const std::string day = pick(rng, kDays);
    const std::string group = pick(rng, kGroups);
    const std::string reaction = pick(rng, kReactions);

    std::string doc = subject + " " + action + " the " + object + " in " + place + " on " +
                      day + " .";
    doc += " " + group + " " + reaction + " the decision by " + subject + " .";
    doc += " the " + object + " will affect " + place + " next year .";

    const int fillers =
        config.min_filler_sentences +
        static_cast<int>(rng.uniform_index(static_cast<uint64_t>(std::max(filler_span, 1))));
    for (int f = 0; f < fillers; ++f) {
      if (rng.uniform() < 0.6) {
        doc += " ";
        doc += pick(rng, kSubjects);
        doc += " ";
        doc += pick(rng, kActions);
        doc += " a ";
        doc += pick(rng, kObjects);
        doc += " in ";
        doc += pick(rng, kPlaces);
        doc += " .";
      } else {
        doc += " ";
        doc += pick(rng, kFillers);
      }
    }

    char id[32];
    std::snprintf(id, sizeof(id), "syn-%05zu", d);
    out.push_back({id, doc, std::nullopt, std::nullopt});
  }
  return out;
}

}  // namespace llmref::pipeline

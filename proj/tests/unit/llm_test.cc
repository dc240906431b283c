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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "llmref/llm/budget.h"
#include "llmref/llm/cache.h"
#include "llmref/llm/client.h"
#include "llmref/llm/http_backend.h"
#include "llmref/llm/mock_backend.h"
#include "llmref/llm/mock_server.h"
#include "llmref/llm/prompts.h"
#include "llmref/util/rng.h"

namespace llmref::llm {
namespace {

namespace fs = std::filesystem;

const char* const kArticle =
    "The mayor opened a new bridge on Monday. Crowds cheered at the river. "
    "Traffic is expected to ease. Officials plan more work next year. Rain fell later.";

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) {
    for (char& c : w) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    out.push_back(w);
  }
  return out;
}

// First three sentences: tokens are grouped until one ends in . ! or ?.
std::string oracle_lead(const std::string& article) {
  std::istringstream in(article);
  std::string out;
  int sentences = 0;
  for (std::string w; sentences < 3 && in >> w;) {
    out += (out.empty() ? "" : " ") + w;
    const char last = w.back();
    if (last == '.' || last == '!' || last == '?') ++sentences;
  }
  return out;
}

double oracle_logprob(const std::string& article, const std::string& candidate) {
  auto lead = words(oracle_lead(article));
  const auto cand = words(candidate);
  if (lead.empty()) return std::log(0.05);
  size_t hit = 0;
  std::multiset<std::string> pool(cand.begin(), cand.end());
  for (const auto& w : lead) {
    if (auto it = pool.find(w); it != pool.end()) {
      ++hit;
      pool.erase(it);
    }
  }
  const double q = static_cast<double>(hit) / static_cast<double>(lead.size());
  return std::log(0.05 + 0.95 * q);
}

ClientOptions fast_options() {
  ClientOptions o;
  o.sleep = [](std::chrono::milliseconds) {};
  return o;
}

struct Fixture {
  std::shared_ptr<MockBackend> backend;
  std::shared_ptr<ResponseCache> cache;
  std::unique_ptr<LlmClient> client;
};

Fixture make_client(ClientOptions options = fast_options(), MockOptions mock = {}) {
  Fixture f;
  f.backend = std::make_shared<MockBackend>(mock);
  f.cache = std::make_shared<ResponseCache>();
  f.client = std::make_unique<LlmClient>(f.backend, f.cache, std::move(options));
  return f;
}

TEST(MockRuleTest, MatchesIndependentReimplementation) {
  EXPECT_EQ(mock::lead_summary(kArticle), oracle_lead(kArticle));
  for (const char* cand : {"The mayor opened a new bridge.", "Rain fell later.", "",
                           "crowds CHEERED at the river traffic"}) {
    EXPECT_NEAR(mock::token_logprob(kArticle, cand), oracle_logprob(kArticle, cand), 1e-12)
        << cand;
  }
}

TEST(ScoreContinuationTest, ReturnsOnlyContinuationTokens) {
  auto f = make_client();
  const std::string context = render_generation_prompt(kArticle);
  const std::string cand = "The mayor opened a bridge.";
  const auto lps = score_continuation(*f.client, context, " " + cand);
  ASSERT_EQ(lps.size(), 5u);
  for (double lp : lps) EXPECT_NEAR(lp, oracle_logprob(kArticle, cand), 1e-12);

  EXPECT_EQ(score_continuation(*f.client, context, " a b c").size(), 3u);
  EXPECT_TRUE(score_continuation(*f.client, context, "").empty());
}

TEST(ScoreContinuationTest, CapabilityErrorWithoutLogprobs) {
  MockOptions m;
  m.supports_logprobs = false;
  auto f = make_client(fast_options(), m);
  try {
    score_continuation(*f.client, "ctx", " cand");
    FAIL() << "expected a capability error";
  } catch (const LlmError& e) {
    EXPECT_EQ(e.kind(), LlmError::Kind::kCapability);
    EXPECT_NE(std::string(e.what()).find("GPTRank"), std::string::npos);
  }
}

TEST(QuasiReferenceTest, PromptAndMockOutput) {
  const std::string prompt = render_generation_prompt("X");
  EXPECT_NE(prompt.find("\nSummarize the above article in three sentences.\n"), std::string::npos);
  EXPECT_EQ(prompt.rfind("Article: X", 0), 0u);

  auto f = make_client();
  const auto a = generate_quasi_reference(*f.client, kArticle);
  EXPECT_EQ(a, oracle_lead(kArticle));
  auto g = make_client();
  EXPECT_EQ(generate_quasi_reference(*g.client, kArticle), a);
  EXPECT_THROW(generate_quasi_reference(*f.client, "  "), LlmError);
}

TEST(ClientTest, SecondIdenticalRequestIsCached) {
  auto f = make_client();
  const auto req = f.client->make_request("Article: a. b. c.\n\nSummarize the above article in three sentences.\n\nSummary:");
  const auto first = f.client->complete(req);
  EXPECT_FALSE(first.cached);
  const long calls = f.backend->calls();
  const auto second = f.client->complete(req);
  EXPECT_TRUE(second.cached);
  EXPECT_EQ(second.text, first.text);
  EXPECT_EQ(f.backend->calls(), calls);
  EXPECT_EQ(f.client->stats().cache_hits, 1);
  EXPECT_EQ(f.client->stats().network_calls, 1);
}

TEST(ClientTest, RetriesWithExponentialBackoff) {
  std::vector<long> sleeps;
  ClientOptions o;
  o.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
  MockOptions m;
  m.fail_network_first = 2;
  m.rate_limit_first = 1;
  auto f = make_client(o, m);
  const auto resp = f.client->complete(f.client->make_request("hello. world."));
  EXPECT_EQ(resp.text, " hello. world.");
  EXPECT_EQ(sleeps, (std::vector<long>{1000, 2000, 4000}));
  EXPECT_EQ(f.client->stats().retries, 3);
  EXPECT_EQ(f.backend->calls(), 4);
}

TEST(ClientTest, GivesUpAfterFiveAttempts) {
  MockOptions m;
  m.rate_limit_first = 10;
  auto f = make_client(fast_options(), m);
  try {
    f.client->complete(f.client->make_request("x"));
    FAIL() << "expected failure";
  } catch (const LlmError& e) {
    EXPECT_EQ(e.kind(), LlmError::Kind::kRateLimited);
  }
  EXPECT_EQ(f.backend->calls(), 5);
}

TEST(ClientTest, MalformedRepliesAreNotRetried) {
  MockOptions m;
  m.malformed_first = 1;
  auto f = make_client(fast_options(), m);
  EXPECT_THROW(f.client->complete(f.client->make_request("x")), LlmError);
  EXPECT_EQ(f.backend->calls(), 1);
}

TEST(ClientTest, ChatPayload) {
  ClientOptions o = fast_options();
  o.chat = true;
  auto f = make_client(o);
  const auto req = f.client->make_request("hi.");
  ASSERT_EQ(req.messages.size(), 1u);
  EXPECT_EQ(req.messages[0].role, "user");
  EXPECT_TRUE(req.prompt.empty());
  EXPECT_EQ(HttpBackend::endpoint(req), "/chat/completions");
}

TEST(BudgetTest, RateArithmetic) {
  RateTable rates;
  rates.per_1k["m"] = 0.002;
  Budget b(rates);
  b.record("m", {1000, 500}, true);
  EXPECT_NEAR(b.spent(), 0.003, 1e-15);
  EXPECT_NEAR(b.billed(), 0.003, 1e-15);
  b.record("m", {1000, 500}, false);
  EXPECT_NEAR(b.spent(), 0.006, 1e-15);
  EXPECT_NEAR(b.billed(), 0.003, 1e-15);
  b.record("other", {5000, 0}, true);
  EXPECT_NEAR(b.spent(), 0.006, 1e-15);
  EXPECT_EQ(b.tallies().at("m").requests, 2);
}

TEST(BudgetTest, RateTableFromJson) {
  const auto t = RateTable::from_json(nlohmann::json::parse(R"({"default": 0.5, "models": {"a": 0.1}})"));
  EXPECT_EQ(t.rate("a"), 0.1);
  EXPECT_EQ(t.rate("b"), 0.5);
}

TEST(BudgetTest, CapStopsFreshRequests) {
  ClientOptions o = fast_options();
  o.rates.default_per_1k = 1000.0;
  o.budget_cap = 1.0;
  auto f = make_client(o);
  const auto req = f.client->make_request("one two three.");
  f.client->complete(req);
  try {
    f.client->complete(f.client->make_request("another prompt."));
    FAIL() << "expected the cap to trigger";
  } catch (const LlmError& e) {
    EXPECT_EQ(e.kind(), LlmError::Kind::kBudgetExceeded);
  }
  // Cached responses are still served.
  EXPECT_TRUE(f.client->complete(req).cached);
}

TEST(CacheKeyTest, StableAndSensitive) {
  LlmRequest a;
  a.model_name = "m";
  a.prompt = "p";
  LlmRequest b = a;
  EXPECT_EQ(ResponseCache::key("x", a), ResponseCache::key("x", b));
  EXPECT_EQ(ResponseCache::key("x", a).size(), 64u);
  EXPECT_NE(ResponseCache::key("y", a), ResponseCache::key("x", a));
  b.attempt = 1;
  EXPECT_NE(ResponseCache::key("x", a), ResponseCache::key("x", b));
  b = a;
  b.temperature = 0.5;
  EXPECT_NE(ResponseCache::key("x", a), ResponseCache::key("x", b));
  b = a;
  b.model_name = "n";
  EXPECT_NE(ResponseCache::key("x", a), ResponseCache::key("x", b));
}

TEST(CacheKeyTest, FuzzedRequestsRoundTripThroughJson) {
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    LlmRequest r;
    r.model_name = "model-" + std::to_string(rng.uniform_index(3));
    if (rng.uniform_index(2)) {
      r.messages.push_back({"user", "msg " + std::to_string(rng.uniform_index(100))});
    } else {
      r.prompt = "prompt " + std::to_string(rng.uniform_index(100));
      r.echo = rng.uniform_index(2) == 1;
    }
    r.temperature = static_cast<double>(rng.uniform_index(3)) / 2.0;
    r.max_tokens = static_cast<int>(rng.uniform_index(500));
    r.want_logprobs = rng.uniform_index(2) == 1;
    const auto key = ResponseCache::key("b", r);
    // Reparsing the canonical payload and re-serialising gives the same text.
    const auto dumped = r.payload().dump();
    EXPECT_EQ(nlohmann::json::parse(dumped).dump(), dumped);
    EXPECT_EQ(ResponseCache::key("b", r), key);
  }
}

TEST(CacheTest, PersistsAcrossInstances) {
  const fs::path dir = fs::temp_directory_path() / "llmref_cache_test";
  fs::remove_all(dir);
  LlmRequest req;
  req.model_name = "m";
  req.prompt = "p";
  LlmResponse resp;
  resp.text = "out";
  resp.usage = {3, 1};
  resp.token_logprobs = std::vector<TokenLogProb>{{"out", -0.5, 1}};
  const auto key = ResponseCache::key("b", req);
  {
    ResponseCache cache(dir);
    cache.put(key, "b", req, resp);
  }
  ResponseCache reopened(dir);
  const auto got = reopened.get(key);
  ASSERT_TRUE(got.has_value());
  EXPECT_EQ(got->text, "out");
  EXPECT_EQ(got->usage, resp.usage);
  EXPECT_EQ(got->token_logprobs, resp.token_logprobs);
  EXPECT_TRUE(fs::exists(dir / "responses" / key.substr(0, 2) / (key + ".json")));
  const auto index = ResponseCache::read_index(dir);
  ASSERT_EQ(index.size(), 1u);
  EXPECT_EQ(index[0].key, key);
  EXPECT_FALSE(reopened.get(ResponseCache::key("b", LlmRequest{"m", "q"})).has_value());
  fs::remove_all(dir);
}

TEST(HttpBackendTest, WireFormat) {
  LlmRequest req;
  req.model_name = "m";
  req.prompt = "p";
  req.echo = true;
  req.want_logprobs = true;
  req.max_tokens = 0;
  const auto body = HttpBackend::request_body(req);
  EXPECT_EQ(body["model"], "m");
  EXPECT_EQ(body["prompt"], "p");
  EXPECT_EQ(body["echo"], true);
  EXPECT_EQ(body["logprobs"], 0);
  EXPECT_EQ(HttpBackend::endpoint(req), "/completions");

  const auto reply = nlohmann::json::parse(R"({
    "choices": [{"text": "p q", "logprobs": {"tokens": ["p", " q"],
      "token_logprobs": [null, -1.5], "text_offset": [0, 1]}}],
    "usage": {"prompt_tokens": 2, "completion_tokens": 0}})");
  const auto resp = HttpBackend::parse_reply(reply, req);
  EXPECT_EQ(resp.text, " q");
  ASSERT_TRUE(resp.token_logprobs.has_value());
  EXPECT_EQ((*resp.token_logprobs)[1].logprob, -1.5);
  EXPECT_EQ(resp.usage.prompt_tokens, 2);
  EXPECT_THROW(HttpBackend::parse_reply(nlohmann::json::object(), req), LlmError);
}

TEST(HttpBackendTest, MissingCredentials) {
  HttpOptions o;
  o.base_url = "http://127.0.0.1:1";
  o.api_key_env = "LLMREF_TEST_UNSET_KEY";
  ::unsetenv("LLMREF_TEST_UNSET_KEY");
  HttpBackend backend(o);
  LlmRequest req;
  req.model_name = "m";
  req.prompt = "p";
  try {
    backend.complete(req);
    FAIL() << "expected a credentials error";
  } catch (const LlmError& e) {
    EXPECT_EQ(e.kind(), LlmError::Kind::kCredentials);
  }
}

TEST(HttpBackendTest, TalksToTheMockServer) {
  auto mock = std::make_shared<MockBackend>();
  MockServer server(mock);
  const int port = server.start();
  HttpOptions o;
  o.base_url = "http://127.0.0.1:" + std::to_string(port) + "/v1";
  o.require_api_key = false;
  auto http = std::make_shared<HttpBackend>(o);
  LlmClient client(http, nullptr, fast_options());

  EXPECT_EQ(generate_quasi_reference(client, kArticle), oracle_lead(kArticle));
  const std::string cand = "Crowds cheered at the river.";
  const auto lps = score_continuation(client, render_generation_prompt(kArticle), " " + cand);
  ASSERT_EQ(lps.size(), 5u);
  for (double lp : lps) EXPECT_NEAR(lp, oracle_logprob(kArticle, cand), 1e-12);

  ClientOptions chat = fast_options();
  chat.chat = true;
  LlmClient chat_client(http, nullptr, chat);
  EXPECT_EQ(generate_quasi_reference(chat_client, kArticle), oracle_lead(kArticle));
  EXPECT_EQ(mock->calls(), 3);
  server.stop();
}

TEST(HttpBackendTest, ConnectionFailureIsRetriedThenReported) {
  HttpOptions o;
  o.base_url = "http://127.0.0.1:9";
  o.require_api_key = false;
  o.timeout = std::chrono::seconds(2);
  LlmClient client(std::make_shared<HttpBackend>(o), nullptr, fast_options());
  try {
    client.complete(client.make_request("x"));
    FAIL() << "expected a network error";
  } catch (const LlmError& e) {
    EXPECT_EQ(e.kind(), LlmError::Kind::kNetwork);
  }
  EXPECT_EQ(client.stats().network_calls, 5);
}

}  // namespace
}  // namespace llmref::llm

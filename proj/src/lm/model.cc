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

#include "llmref/lm/model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "llmref/util/rng.h"

namespace llmref::lm {

double clamped_log(double p) { return std::log(std::max(p, kProbFloor)); }

double Gradients::norm() const {
  double s = 0.0;
  for (double v : values) s += v * v;
  return std::sqrt(s);
}

bool Gradients::all_finite() const {
  return std::all_of(values.begin(), values.end(),
                     [](double v) { return std::isfinite(v); });
}

Gradients& Gradients::operator+=(const Gradients& other) {
  if (other.layout != layout) throw std::invalid_argument("gradient layout mismatch");
  for (size_t i = 0; i < values.size(); ++i) values[i] += other.values[i];
  return *this;
}

Gradients& Gradients::operator*=(double scale) {
  for (double& v : values) v *= scale;
  return *this;
}

ToyLM::ToyLM(Vocabulary vocab, ModelConfig config)
    : vocab_(std::move(vocab)), config_(config) {
  if (config_.embed_dim < 1 || config_.context < 1 || config_.hidden < 1) {
    throw std::invalid_argument("model dimensions must be positive");
  }
  const size_t n = vocab_.size();
  const size_t d = config_.embed_dim;
  const size_t h = config_.hidden;
  const size_t in = d * (config_.context + 1);
  size_t offset = 0;
  auto add = [&](std::string name, size_t rows, size_t cols) {
    layout_.push_back({std::move(name), rows, cols, offset});
    offset += rows * cols;
  };
  add("embed", n, d);
  add("doc_w", d, d);
  add("doc_b", d, 1);
  add("hidden_w", h, in);
  add("hidden_b", h, 1);
  add("out_w", n, h);
  add("out_b", n, 1);
  params_.assign(offset, 0.0);

  Rng rng(config_.seed);
  auto fill = [&](Block b, double stddev) {
    for (double& v : block(b)) v = stddev * rng.normal();
  };
  const double s = config_.init_scale;
  fill(kEmbed, s * 1.0);
  fill(kDocW, s / std::sqrt(static_cast<double>(d)));
  fill(kHiddenW, s / std::sqrt(static_cast<double>(in)));
  fill(kOutW, s / std::sqrt(static_cast<double>(h)));
}

Gradients ToyLM::zero_gradients() const {
  return Gradients{layout_, std::vector<double>(params_.size(), 0.0)};
}

bool ToyLM::all_finite() const {
  return std::all_of(params_.begin(), params_.end(),
                     [](double v) { return std::isfinite(v); });
}

DocumentContext ToyLM::encode_document(const TokenSeq& document) const {
  vocab_.check(document);
  const size_t d = config_.embed_dim;
  DocumentContext ctx;
  ctx.tokens = document.ids;
  ctx.mean.assign(d, 0.0);
  const auto embed = block(kEmbed);
  for (int id : document.ids) {
    for (size_t c = 0; c < d; ++c) ctx.mean[c] += embed[id * d + c];
  }
  const double inv = 1.0 / static_cast<double>(document.ids.size());
  for (double& v : ctx.mean) v *= inv;

  const auto w = block(kDocW);
  const auto b = block(kDocB);
  ctx.encoded.assign(d, 0.0);
  for (size_t r = 0; r < d; ++r) {
    double z = b[r];
    for (size_t c = 0; c < d; ++c) z += w[r * d + c] * ctx.mean[c];
    ctx.encoded[r] = std::tanh(z);
  }
  return ctx;
}

int ToyLM::context_token(std::span<const int> prefix, int slot) const {
  // slot 0 is the oldest of the k context positions.
  const int k = config_.context;
  const long idx = static_cast<long>(prefix.size()) - k + slot;
  return idx < 0 ? Vocabulary::kBos : prefix[idx];
}

void ToyLM::step(const DocumentContext& doc, std::span<const int> prefix,
                 StepState& state) const {
  const size_t n = vocab_.size();
  const size_t d = config_.embed_dim;
  const size_t hdim = config_.hidden;
  const size_t k = config_.context;
  const size_t in = d * (k + 1);
  if (prefix.empty() || prefix.front() != Vocabulary::kBos) {
    throw VocabError("prefix must begin with BOS");
  }
  for (int id : prefix) {
    if (id < 0 || id >= vocab_.size()) {
      throw VocabError("token id " + std::to_string(id) + " out of range");
    }
  }

  const auto embed = block(kEmbed);
  state.input.resize(in);
  std::copy(doc.encoded.begin(), doc.encoded.end(), state.input.begin());
  for (size_t s = 0; s < k; ++s) {
    const int tok = context_token(prefix, static_cast<int>(s));
    std::copy_n(embed.begin() + tok * d, d, state.input.begin() + (s + 1) * d);
  }

  const auto hw = block(kHiddenW);
  const auto hb = block(kHiddenB);
  state.hidden.resize(hdim);
  for (size_t j = 0; j < hdim; ++j) {
    double z = hb[j];
    const double* row = hw.data() + j * in;
    for (size_t i = 0; i < in; ++i) z += row[i] * state.input[i];
    state.hidden[j] = std::tanh(z);
  }

  const auto ow = block(kOutW);
  const auto ob = block(kOutB);
  state.probs.resize(n);
  double max_logit = -INFINITY;
  for (size_t v = 0; v < n; ++v) {
    double z = ob[v];
    const double* row = ow.data() + v * hdim;
    for (size_t j = 0; j < hdim; ++j) z += row[j] * state.hidden[j];
    state.probs[v] = z;
    max_logit = std::max(max_logit, z);
  }
  double total = 0.0;
  for (double& p : state.probs) {
    p = std::exp(p - max_logit);
    total += p;
  }
  for (double& p : state.probs) p /= total;
}

std::vector<double> ToyLM::forward(const DocumentContext& doc,
                                   std::span<const int> prefix) const {
  StepState state;
  step(doc, prefix, state);
  return std::move(state.probs);
}

std::vector<double> ToyLM::forward(const TokenSeq& document,
                                   const TokenSeq& prefix) const {
  return forward(encode_document(document), prefix.ids);
}

std::vector<double> ToyLM::token_log_probs(const DocumentContext& doc,
                                           const TokenSeq& summary) const {
  vocab_.check(summary);
  std::vector<double> out;
  out.reserve(summary.length());
  StepState state;
  const std::span<const int> ids(summary.ids);
  for (size_t i = 0; i < summary.length(); ++i) {
    step(doc, ids.first(i + 1), state);
    out.push_back(clamped_log(state.probs[summary.ids[i + 1]]));
  }
  return out;
}

DocumentBackprop::DocumentBackprop(const ToyLM& model, const DocumentContext& doc,
                                   Gradients& grad)
    : model_(model), doc_(doc), grad_(grad),
      d_doc_(model.config().embed_dim, 0.0) {
  if (grad.layout != model.layout()) {
    throw std::invalid_argument("gradient layout does not match model");
  }
}

void DocumentBackprop::add_sequence(const TokenSeq& seq, const LogitGradFn& fn) {
  model_.vocab().check(seq);
  const size_t n = model_.vocab_size();
  const size_t d = model_.config().embed_dim;
  const size_t hdim = model_.config().hidden;
  const size_t k = model_.config().context;
  const size_t in = d * (k + 1);

  const auto hw = model_.block(ToyLM::kHiddenW);
  const auto ow = model_.block(ToyLM::kOutW);
  auto g_embed = grad_.block(ToyLM::kEmbed);
  auto g_hw = grad_.block(ToyLM::kHiddenW);
  auto g_hb = grad_.block(ToyLM::kHiddenB);
  auto g_ow = grad_.block(ToyLM::kOutW);
  auto g_ob = grad_.block(ToyLM::kOutB);

  ToyLM::StepState state;
  std::vector<double> dlogits(n);
  std::vector<double> dz(hdim);
  std::vector<double> dx(in);
  const std::span<const int> ids(seq.ids);
  for (size_t pos = 0; pos < seq.length(); ++pos) {
    const auto prefix = ids.first(pos + 1);
    model_.step(doc_, prefix, state);
    std::fill(dlogits.begin(), dlogits.end(), 0.0);
    fn(pos, state.probs, dlogits);

    std::fill(dz.begin(), dz.end(), 0.0);
    for (size_t v = 0; v < n; ++v) {
      const double g = dlogits[v];
      if (g == 0.0) continue;
      g_ob[v] += g;
      double* grow = g_ow.data() + v * hdim;
      const double* wrow = ow.data() + v * hdim;
      for (size_t j = 0; j < hdim; ++j) {
        grow[j] += g * state.hidden[j];
        dz[j] += g * wrow[j];
      }
    }
    for (size_t j = 0; j < hdim; ++j) {
      dz[j] *= 1.0 - state.hidden[j] * state.hidden[j];
    }

    std::fill(dx.begin(), dx.end(), 0.0);
    for (size_t j = 0; j < hdim; ++j) {
      const double g = dz[j];
      if (g == 0.0) continue;
      g_hb[j] += g;
      double* grow = g_hw.data() + j * in;
      const double* wrow = hw.data() + j * in;
      for (size_t i = 0; i < in; ++i) {
        grow[i] += g * state.input[i];
        dx[i] += g * wrow[i];
      }
    }
    for (size_t c = 0; c < d; ++c) d_doc_[c] += dx[c];
    for (size_t s = 0; s < k; ++s) {
      const int tok = model_.context_token(prefix, static_cast<int>(s));
      for (size_t c = 0; c < d; ++c) g_embed[tok * d + c] += dx[(s + 1) * d + c];
    }
  }
}

void DocumentBackprop::finish() {
  if (finished_) return;
  finished_ = true;
  const size_t d = model_.config().embed_dim;
  const auto w = model_.block(ToyLM::kDocW);
  auto g_embed = grad_.block(ToyLM::kEmbed);
  auto g_w = grad_.block(ToyLM::kDocW);
  auto g_b = grad_.block(ToyLM::kDocB);

  std::vector<double> da(d);
  for (size_t r = 0; r < d; ++r) {
    da[r] = d_doc_[r] * (1.0 - doc_.encoded[r] * doc_.encoded[r]);
  }
  std::vector<double> dmean(d, 0.0);
  for (size_t r = 0; r < d; ++r) {
    g_b[r] += da[r];
    for (size_t c = 0; c < d; ++c) {
      g_w[r * d + c] += da[r] * doc_.mean[c];
      dmean[c] += w[r * d + c] * da[r];
    }
  }
  const double inv = 1.0 / static_cast<double>(doc_.tokens.size());
  for (int id : doc_.tokens) {
    for (size_t c = 0; c < d; ++c) g_embed[id * d + c] += dmean[c] * inv;
  }
}

double sequence_log_prob(const ToyLM& model, const DocumentContext& doc,
                         const TokenSeq& summary, EmptyPolicy policy) {
  if (summary.length() == 0) {
    model.vocab().check(summary);
    if (policy == EmptyPolicy::kAllowEmpty) return 0.0;
    throw std::invalid_argument("sequence_log_prob: empty summary");
  }
  double total = 0.0;
  for (double lp : model.token_log_probs(doc, summary)) total += lp;
  return total;
}

double sequence_log_prob(const ToyLM& model, const TokenSeq& document,
                         const TokenSeq& summary, EmptyPolicy policy) {
  return sequence_log_prob(model, model.encode_document(document), summary, policy);
}

double normalized_log_prob(const ToyLM& model, const DocumentContext& doc,
                           const TokenSeq& summary) {
  if (summary.length() == 0) {
    throw std::invalid_argument("normalized_log_prob: empty summary");
  }
  return sequence_log_prob(model, doc, summary) /
         static_cast<double>(summary.length());
}

double normalized_log_prob(const ToyLM& model, const TokenSeq& document,
                           const TokenSeq& summary) {
  return normalized_log_prob(model, model.encode_document(document), summary);
}

namespace {
constexpr std::string_view kCheckpointFormat = "llmref-toylm";
constexpr int kCheckpointVersion = 1;
}  // namespace

void save_checkpoint(const ToyLM& model, const std::filesystem::path& path) {
  using nlohmann::json;
  const auto& tokens = model.vocab().tokens();
  json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kCheckpointVersion;
  j["vocabulary"] = std::vector<std::string>(tokens.begin() + Vocabulary::kNumSpecial,
                                             tokens.end());
  j["special"] = {{"bos", Vocabulary::kBos},
                  {"eos", Vocabulary::kEos},
                  {"unk", Vocabulary::kUnk}};
  const auto& c = model.config();
  j["config"] = {{"embed_dim", c.embed_dim},
                 {"context", c.context},
                 {"hidden", c.hidden},
                 {"seed", c.seed},
                 {"init_scale", c.init_scale}};
  j["parameter_count"] = model.parameter_count();
  const auto p = model.parameters();
  j["parameters"] = std::vector<double>(p.begin(), p.end());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out << j.dump() << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

ToyLM load_checkpoint(const std::filesystem::path& path) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed checkpoint " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != kCheckpointFormat) {
    throw std::runtime_error("not a toy model checkpoint: " + path.string());
  }
  if (j.value("version", 0) != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version in " + path.string());
  }
  const auto& s = j.at("special");
  if (s.at("bos") != Vocabulary::kBos || s.at("eos") != Vocabulary::kEos ||
      s.at("unk") != Vocabulary::kUnk) {
    throw std::runtime_error("checkpoint uses an incompatible special-token layout");
  }
  ModelConfig c;
  const auto& jc = j.at("config");
  c.embed_dim = jc.at("embed_dim");
  c.context = jc.at("context");
  c.hidden = jc.at("hidden");
  c.seed = jc.at("seed");
  c.init_scale = jc.at("init_scale");
  ToyLM model(Vocabulary(j.at("vocabulary").get<std::vector<std::string>>()), c);
  const auto params = j.at("parameters").get<std::vector<double>>();
  if (params.size() != model.parameter_count()) {
    throw std::runtime_error("checkpoint parameter count mismatch");
  }
  std::copy(params.begin(), params.end(), model.mutable_parameters().begin());
  return model;
}

}  // namespace llmref::lm

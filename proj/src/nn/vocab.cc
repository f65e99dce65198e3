// Copyright 2026 The gotext Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gotext/nn/vocab.h"

#include <cstdio>
#include <stdexcept>

#include "gotext/engine/rng.h"

namespace gotext::nn {
namespace {

const std::vector<std::string>& Reserved() {
  static const std::vector<std::string> kReserved = {
      std::string(kPadToken), std::string(kUnkToken), std::string(kSosToken),
      std::string(kEosToken), std::string(kSepToken), std::string(kNoneToken)};
  return kReserved;
}

}  // namespace

Vocab::Vocab() {
  for (const std::string& t : Reserved()) {
    index_.emplace(t, static_cast<int>(tokens_.size()));
    tokens_.push_back(t);
  }
}

Vocab Vocab::FromTokens(const std::vector<std::string>& ordered) {
  const auto& reserved = Reserved();
  if (ordered.size() < reserved.size()) throw std::invalid_argument("vocabulary lacks reserved tokens");
  for (std::size_t i = 0; i < reserved.size(); ++i) {
    if (ordered[i] != reserved[i]) throw std::invalid_argument("vocabulary reserved tokens out of order");
  }
  Vocab v;
  for (std::size_t i = reserved.size(); i < ordered.size(); ++i) {
    if (!v.index_.emplace(ordered[i], static_cast<int>(v.tokens_.size())).second) {
      throw std::invalid_argument("duplicate vocabulary token " + ordered[i]);
    }
    v.tokens_.push_back(ordered[i]);
  }
  return v;
}

Vocab Vocab::Build(const std::set<std::string>& tokens, std::size_t min_size) {
  Vocab v;
  for (const std::string& t : tokens) {
    if (v.index_.count(t)) continue;
    v.index_.emplace(t, static_cast<int>(v.tokens_.size()));
    v.tokens_.push_back(t);
  }
  for (int n = 0; v.tokens_.size() < min_size; ++n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "filler%05d", n);
    if (v.index_.count(buf)) continue;
    v.index_.emplace(buf, static_cast<int>(v.tokens_.size()));
    v.tokens_.push_back(buf);
  }
  return v;
}

int Vocab::Id(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? kUnkId : it->second;
}

std::vector<int> Vocab::Encode(const Tokens& tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(Id(t));
  return ids;
}

std::uint64_t Vocab::Hash() const {
  std::string joined;
  for (const std::string& t : tokens_) {
    joined += t;
    joined += '\n';
  }
  return Fnv1a64(joined);
}

std::string Vocab::HashHex() const {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(Hash()));
  return buf;
}

Vocab Vocab::FromJson(const nlohmann::json& j) { return FromTokens(j.get<std::vector<std::string>>()); }

Tokens AssembleInput(const Observation& obs, int max_tokens) {
  Tokens out;
  const Tokens* channels[] = {&obs.description, &obs.inventory, &obs.quest, &obs.prev_action,
                              &obs.feedback};
  for (int k = 0; k < 5; ++k) {
    if (k > 0) out.emplace_back(kSepToken);
    AppendTokens(out, *channels[k]);
  }
  if (max_tokens > 0 && out.size() > static_cast<std::size_t>(max_tokens)) {
    out.erase(out.begin(), out.end() - max_tokens);
  }
  if (out.empty()) out.emplace_back(kPadToken);
  return out;
}

EmbeddingInit InitEmbeddings(const Vocab& vocab, int dim, const WordVectors* pretrained,
                             std::uint64_t seed, double random_scale) {
  if (pretrained && pretrained->dim() != dim) {
    throw ShapeMismatch("pretrained vectors have dim " + std::to_string(pretrained->dim()) +
                        ", model expects " + std::to_string(dim));
  }
  EmbeddingInit out;
  out.table = Matrix::Zero(static_cast<Eigen::Index>(vocab.size()), dim);
  for (std::size_t id = 1; id < vocab.size(); ++id) {
    const std::string& token = vocab.Token(static_cast<int>(id));
    const double* row = pretrained ? pretrained->Find(token) : nullptr;
    if (row) {
      for (int k = 0; k < dim; ++k) out.table(static_cast<Eigen::Index>(id), k) = row[k];
      ++out.pretrained;
    } else {
      const std::vector<double> r = WordVectors::SeededRow(token, dim, seed);
      for (int k = 0; k < dim; ++k) out.table(static_cast<Eigen::Index>(id), k) = random_scale * r[k];
      ++out.random;
    }
  }
  return out;
}

}  // namespace gotext::nn

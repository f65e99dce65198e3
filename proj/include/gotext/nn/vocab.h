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

#ifndef GOTEXT_NN_VOCAB_H_
#define GOTEXT_NN_VOCAB_H_

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "gotext/engine/engine.h"
#include "gotext/engine/text.h"
#include "gotext/nn/tensor.h"
#include "gotext/nn/word_vectors.h"

namespace gotext::nn {

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";
inline constexpr std::string_view kSosToken = "<sos>";
inline constexpr std::string_view kEosToken = "<eos>";
inline constexpr std::string_view kSepToken = "<sep>";
inline constexpr std::string_view kNoneToken = "<s>";

inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kSosId = 2;
inline constexpr int kEosId = 3;
inline constexpr int kSepId = 4;
inline constexpr int kNoneId = 5;
inline constexpr int kNumReserved = 6;

// Token <-> id map. Reserved tokens take ids 0..5, then the remaining
// tokens in sorted order.
class Vocab {
 public:
  Vocab();

  // `min_size` > 0 pads with "filler<n>" tokens up to that many entries.
  static Vocab Build(const std::set<std::string>& tokens, std::size_t min_size = 0);
  static Vocab FromTokens(const std::vector<std::string>& ordered);

  int Id(std::string_view token) const;  // kUnkId if absent
  bool Contains(std::string_view token) const { return index_.count(std::string(token)) != 0; }
  const std::string& Token(int id) const { return tokens_.at(static_cast<std::size_t>(id)); }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  std::vector<int> Encode(const Tokens& tokens) const;

  static bool IsReserved(int id) { return id >= 0 && id < kNumReserved; }

  // FNV-1a over the ordered token list.
  std::uint64_t Hash() const;
  std::string HashHex() const;

  nlohmann::json ToJson() const { return tokens_; }
  static Vocab FromJson(const nlohmann::json& j);

 private:
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, int> index_;
};

inline constexpr int kMaxInputTokens = 256;

// D <sep> I <sep> Q <sep> P <sep> F, keeping the last `max_tokens` tokens.
// An empty result becomes a single <pad>.
Tokens AssembleInput(const Observation& obs, int max_tokens = kMaxInputTokens);

struct EmbeddingInit {
  Matrix table;          // [|V|, dim]
  std::size_t pretrained = 0;
  std::size_t random = 0;  // rows missing from the pretrained file
};

// Pretrained rows where available, otherwise seeded normal rows scaled by
// `random_scale`. The <pad> row is zero.
EmbeddingInit InitEmbeddings(const Vocab& vocab, int dim, const WordVectors* pretrained,
                             std::uint64_t seed, double random_scale = 0.3);

}  // namespace gotext::nn

#endif  // GOTEXT_NN_VOCAB_H_

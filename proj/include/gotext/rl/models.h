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

#ifndef GOTEXT_RL_MODELS_H_
#define GOTEXT_RL_MODELS_H_

#include <array>
#include <functional>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "gotext/nn/layers.h"
#include "gotext/nn/vocab.h"
#include "gotext/nn/word_vectors.h"
#include "gotext/rl/slots.h"

namespace gotext::rl {

using nn::Matrix;
using nn::Vector;

class EmptyAdmissibleSet : public std::invalid_argument {
 public:
  EmptyAdmissibleSet() : std::invalid_argument("admissible action set is empty") {}
};

struct RlConfig {
  int emb_dim = 50;
  int hidden = 50;
  int max_input_tokens = nn::kMaxInputTokens;
  bool freeze_embeddings = false;
  std::uint64_t seed = 0;
};

nlohmann::json RlConfigToJson(const RlConfig& c);
RlConfig RlConfigFromJson(const nlohmann::json& j);

// Embedding + LSTM over the observation tokens, mean-pooled.
class ObservationEncoder {
 public:
  ObservationEncoder() = default;
  ObservationEncoder(nn::ParameterStore& store, int vocab_size, int emb_dim, int hidden);
  void Bind(nn::ParameterStore& store);

  struct Trace {
    std::vector<int> ids;
    std::vector<nn::LstmCache> caches;
    int rows = 0;
  };
  Vector Forward(const std::vector<int>& ids, Trace* trace = nullptr) const;
  void Backward(const Trace& trace, const Vector& dpooled) const;

  nn::Parameter* embedding = nullptr;
  nn::LstmParams lstm;
};

// Q(o, w) = h_o W_type + b_type for each word slot.
class SlotQModel {
 public:
  SlotQModel(nn::Vocab vocab, SlotVocab slots, RlConfig config,
             const WordVectors* pretrained = nullptr);

  using SlotValues = std::array<Vector, kNumSlots>;
  SlotValues QValues(const std::vector<int>& ids) const;
  // Forward, then backpropagates dq (gradient of some loss w.r.t. the five Q
  // vectors) into the parameter gradients.
  SlotValues Backprop(const std::vector<int>& ids, const std::function<SlotValues(const SlotValues&)>& dq);

  std::vector<int> EncodeObservation(const Observation& obs) const;

  std::unique_ptr<SlotQModel> Clone() const;
  void CopyValuesFrom(const SlotQModel& other) { store_->CopyValuesFrom(*other.store_); }

  void Save(const std::filesystem::path& path, nlohmann::json extra = nlohmann::json::object()) const;
  static SlotQModel Load(const std::filesystem::path& path);

  nn::ParameterStore& params() { return *store_; }
  const nn::ParameterStore& params() const { return *store_; }
  const nn::Vocab& vocab() const { return vocab_; }
  const SlotVocab& slots() const { return slots_; }
  const RlConfig& config() const { return config_; }
  const nn::LinearParams& head(int slot) const { return heads_[slot]; }

 private:
  void Bind();

  nn::Vocab vocab_;
  SlotVocab slots_;
  RlConfig config_;
  std::unique_ptr<nn::ParameterStore> store_;
  ObservationEncoder encoder_;
  std::array<nn::LinearParams, kNumSlots> heads_;
};

// Q(o, a) = h_o . sum_k E(a^k). Needs emb_dim == hidden.
class DrrnModel {
 public:
  DrrnModel(nn::Vocab vocab, RlConfig config, const WordVectors* pretrained = nullptr);

  Vector Scores(const std::vector<int>& ids, const std::vector<std::vector<int>>& actions) const;
  // Forward, then backpropagates dscores = dloss/dscores.
  Vector Backprop(const std::vector<int>& ids, const std::vector<std::vector<int>>& actions,
                  const std::function<Vector(const Vector&)>& dscores);

  std::vector<int> EncodeObservation(const Observation& obs) const;
  std::vector<int> EncodeAction(const Tokens& action) const { return vocab_.Encode(action); }

  std::unique_ptr<DrrnModel> Clone() const;
  void CopyValuesFrom(const DrrnModel& other) { store_->CopyValuesFrom(*other.store_); }

  void Save(const std::filesystem::path& path, nlohmann::json extra = nlohmann::json::object()) const;
  static DrrnModel Load(const std::filesystem::path& path);

  nn::ParameterStore& params() { return *store_; }
  const nn::ParameterStore& params() const { return *store_; }
  const nn::Vocab& vocab() const { return vocab_; }
  const RlConfig& config() const { return config_; }

 private:
  void Bind();

  nn::Vocab vocab_;
  RlConfig config_;
  std::unique_ptr<nn::ParameterStore> store_;
  ObservationEncoder encoder_;
};

// Index of the largest score, ties to the lowest index.
int ArgMax(const Vector& v);

// Finite-difference checks of both Q-models over random small instances.
double SlotModelGradientCheck(int draws, std::uint64_t seed);
double DrrnGradientCheck(int draws, std::uint64_t seed);

}  // namespace gotext::rl

#endif  // GOTEXT_RL_MODELS_H_

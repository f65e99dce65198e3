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

#ifndef GOTEXT_POLICY_SEQ2SEQ_H_
#define GOTEXT_POLICY_SEQ2SEQ_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "gotext/engine/engine.h"
#include "gotext/explore/trajectory.h"
#include "gotext/nn/adam.h"
#include "gotext/nn/layers.h"
#include "gotext/nn/vocab.h"
#include "gotext/nn/word_vectors.h"

namespace gotext::policy {

using nn::Matrix;
using nn::Vector;

using nn::AssembleInput;
using nn::kMaxInputTokens;
inline constexpr int kMaxDecodeLen = 5;

class OutOfVocabularyTarget : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct PolicyConfig {
  int emb_dim = 100;
  int hidden = 300;
  int max_decode_len = kMaxDecodeLen;
  int max_input_tokens = kMaxInputTokens;
  bool freeze_embeddings = false;
  std::uint64_t seed = 0;
};

nlohmann::json PolicyConfigToJson(const PolicyConfig& c);
PolicyConfig PolicyConfigFromJson(const nlohmann::json& j);

struct Example {
  std::vector<int> input;
  std::vector<int> target;  // without <eos>
};
using ImitationDataset = std::vector<Example>;

// One example per trajectory step. Throws OutOfVocabularyTarget if an action
// token is missing from `vocab`.
ImitationDataset BuildDataset(const std::vector<Trajectory>& trajectories, const nn::Vocab& vocab,
                              int max_input_tokens = kMaxInputTokens);

struct DecodeResult {
  Tokens action;         // reserved tokens removed
  std::vector<int> ids;  // raw argmax ids up to, excluding, <eos>
  bool empty = false;    // nothing left after stripping
};

class PolicyModel {
 public:
  PolicyModel(nn::Vocab vocab, PolicyConfig config, const WordVectors* pretrained = nullptr);

  struct Encoding {
    Matrix H;  // [len, hidden]
    Vector h_last;
    Vector c_last;
  };
  Encoding Encode(const std::vector<int>& input) const;

  // Sum of -log p over target tokens and the closing <eos>.
  double TeacherForcedLoss(const std::vector<int>& input, const std::vector<int>& target) const;
  // Same loss; adds scale * gradient into the parameter gradients.
  double AccumulateGradients(const std::vector<int>& input, const std::vector<int>& target,
                             double scale = 1.0);

  DecodeResult DecodeGreedy(const std::vector<int>& input) const;
  // Greedy action for an observation; an empty decode becomes "look".
  Tokens Act(const Observation& obs) const;

  std::vector<int> EncodeObservation(const Observation& obs) const;

  void Save(const std::filesystem::path& path, nlohmann::json extra = nlohmann::json::object()) const;
  static PolicyModel Load(const std::filesystem::path& path);

  nn::ParameterStore& params() { return *store_; }
  const nn::ParameterStore& params() const { return *store_; }
  const nn::Vocab& vocab() const { return vocab_; }
  const PolicyConfig& config() const { return config_; }
  std::size_t pretrained_rows() const { return pretrained_rows_; }
  std::size_t random_rows() const { return random_rows_; }

  nn::Parameter& embedding() { return *embedding_; }
  const nn::LinearParams& head() const { return head_; }

 private:
  void Bind();
  void CheckTarget(const std::vector<int>& target) const;
  double Run(const std::vector<int>& input, const std::vector<int>& target, double scale,
             bool backward) const;

  nn::Vocab vocab_;
  PolicyConfig config_;
  std::unique_ptr<nn::ParameterStore> store_;
  nn::Parameter* embedding_ = nullptr;
  nn::LstmParams encoder_;
  nn::LstmParams decoder_;
  nn::LinearParams head_;
  std::size_t pretrained_rows_ = 0;
  std::size_t random_rows_ = 0;
};

struct TrainConfig {
  int epochs = 20;
  int batch_size = 32;
  nn::AdamConfig adam;
  std::uint64_t seed = 0;
  // Stop once the epoch's mean per-example loss falls below this.
  double target_loss = 0;
  // Epochs without validation improvement before stopping; 0 disables.
  int patience = 0;
};

nlohmann::json TrainConfigToJson(const TrainConfig& c);

struct TrainResult {
  std::vector<double> epoch_loss;       // mean per-example loss seen during the epoch
  std::vector<double> validation_loss;  // after each epoch, when given
  int best_epoch = -1;
};

// Mini-batch Adam over a seeded shuffle. With a validation set the
// parameters from the best validation epoch are restored at the end.
TrainResult Train(PolicyModel& model, const ImitationDataset& data, const TrainConfig& config,
                  const ImitationDataset* validation = nullptr);

double MeanLoss(const PolicyModel& model, const ImitationDataset& data);

struct PlayResult {
  int score = 0;
  int max_score = 0;
  int steps = 0;
  bool win = false;
  std::vector<Tokens> actions;
};

PlayResult Play(const PolicyModel& model, std::shared_ptr<const GameSpec> spec,
                int max_steps = kMaxEpisodeSteps);

// Finite-difference check of the full encoder-decoder loss on small random
// models; returns the worst relative error over `draws` draws.
double PolicyGradientCheck(int draws, std::uint64_t seed);

}  // namespace gotext::policy

#endif  // GOTEXT_POLICY_SEQ2SEQ_H_

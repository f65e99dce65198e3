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

#ifndef GOTEXT_RL_DQN_H_
#define GOTEXT_RL_DQN_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "gotext/engine/engine.h"
#include "gotext/engine/rng.h"
#include "gotext/nn/adam.h"
#include "gotext/rl/models.h"

namespace gotext::rl {

enum class AgentKind { kLstmDqn, kLstmDqnAdm, kDrrn };
enum class ExploreMode { kFree, kAdm };

std::string_view AgentName(AgentKind kind);
std::optional<AgentKind> ParseAgentKind(std::string_view name);

struct SlotChoice {
  Tokens action;
  std::optional<SlotAction> slots;
  bool random = false;
};

// With probability 1 - eps, the per-slot argmax (ties to the lowest index)
// joined with <s> slots dropped. Otherwise free mode draws each slot word
// uniformly and adm mode draws a uniform admissible action.
SlotChoice SlotAct(const SlotQModel::SlotValues& q, double eps, ExploreMode mode,
                   const std::vector<Tokens>& admissible, const SlotVocab& slots, SplitMix64& rng);

struct Transition {
  std::vector<int> obs;
  Tokens action;
  std::optional<SlotAction> slots;
  std::vector<int> action_ids;
  double reward = 0;
  std::vector<int> next_obs;
  bool done = false;
  std::vector<std::vector<int>> next_admissible;
};

// Fixed-capacity ring with uniform sampling (with replacement).
class ReplayBuffer {
 public:
  ReplayBuffer(std::size_t capacity, std::uint64_t seed);

  void Add(Transition t);
  std::size_t size() const { return items_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Transition& at(std::size_t i) const { return items_.at(i); }
  std::vector<const Transition*> Sample(std::size_t n);

 private:
  std::size_t capacity_;
  std::size_t next_ = 0;
  std::vector<Transition> items_;
  SplitMix64 rng_;
};

struct DqnConfig {
  double gamma = 0.9;
  std::size_t buffer_capacity = 50000;
  int batch_size = 64;
  int target_sync = 1000;
  double eps_start = 1.0;
  double eps_end = 0.1;
  int eps_steps = 10000;
  int episodes = 100;
  int max_steps = kMaxEpisodeSteps;
  int update_every = 1;
  // Environment steps before the first update; 0 means one batch.
  int learning_starts = 0;
  nn::AdamConfig adam;
  std::uint64_t seed = 0;
};

nlohmann::json DqnConfigToJson(const DqnConfig& c);
DqnConfig DqnConfigFromJson(const nlohmann::json& j);

double EpsilonAt(const DqnConfig& c, std::int64_t step);

// One of the three baseline agents.
class Agent {
 public:
  static Agent Create(AgentKind kind, const std::vector<const GameSpec*>& specs, RlConfig config,
                      const WordVectors* pretrained = nullptr);

  AgentKind kind() const { return kind_; }
  std::vector<int> EncodeObservation(const Observation& obs) const;

  // Epsilon-greedy action; `eps` = 0 is greedy play.
  SlotChoice Act(const Observation& obs, const std::vector<Tokens>& admissible, double eps,
                 SplitMix64& rng) const;

  SlotQModel* slot() { return slot_.get(); }
  const SlotQModel* slot() const { return slot_.get(); }
  DrrnModel* drrn() { return drrn_.get(); }
  const DrrnModel* drrn() const { return drrn_.get(); }
  nn::ParameterStore& params();

  void Save(const std::filesystem::path& path, nlohmann::json extra = nlohmann::json::object()) const;
  static Agent Load(const std::filesystem::path& path);

 private:
  AgentKind kind_ = AgentKind::kDrrn;
  std::shared_ptr<SlotQModel> slot_;
  std::shared_ptr<DrrnModel> drrn_;
};

// One-step temporal-difference learner with a target network. Step fits the
// online network to r + gamma * max Q_target(next) on a batch with one Adam
// update.
class TdLearner {
 public:
  TdLearner(Agent& agent, nn::AdamConfig adam, double gamma);
  ~TdLearner();
  TdLearner(const TdLearner&) = delete;
  TdLearner& operator=(const TdLearner&) = delete;

  // Returns the mean squared TD error before the update (summed over slots
  // for slot models).
  double Step(const std::vector<const Transition*>& batch);
  void SyncTarget();
  std::int64_t updates() const { return updates_; }

 private:
  struct Impl;
  Agent& agent_;
  nn::Adam adam_;
  double gamma_;
  std::int64_t updates_ = 0;
  std::unique_ptr<Impl> impl_;
};

struct DqnResult {
  std::vector<double> episode_scores;
  std::int64_t env_steps = 0;
  std::int64_t updates = 0;
};

// Episodes cycle over `games` in order.
DqnResult DqnTrain(Agent& agent, const std::vector<std::shared_ptr<const GameSpec>>& games,
                   const DqnConfig& config);

struct EpisodeResult {
  int score = 0;
  int max_score = 0;
  int steps = 0;
  bool win = false;
  std::vector<Tokens> actions;
};

EpisodeResult PlayGreedy(const Agent& agent, std::shared_ptr<const GameSpec> spec,
                         int max_steps = kMaxEpisodeSteps);

// Uniform random admissible policy.
EpisodeResult PlayRandom(std::shared_ptr<const GameSpec> spec, std::uint64_t seed,
                         int max_steps = kMaxEpisodeSteps);

}  // namespace gotext::rl

#endif  // GOTEXT_RL_DQN_H_

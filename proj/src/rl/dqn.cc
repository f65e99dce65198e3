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

#include "gotext/rl/dqn.h"

#include <algorithm>
#include <map>
#include <set>

#include "gotext/nn/checkpoint.h"

namespace gotext::rl {

std::string_view AgentName(AgentKind kind) {
  switch (kind) {
    case AgentKind::kLstmDqn: return "lstm-dqn";
    case AgentKind::kLstmDqnAdm: return "lstm-dqn-adm";
    case AgentKind::kDrrn: return "drrn";
  }
  return "";
}

std::optional<AgentKind> ParseAgentKind(std::string_view name) {
  for (AgentKind k : {AgentKind::kLstmDqn, AgentKind::kLstmDqnAdm, AgentKind::kDrrn}) {
    if (AgentName(k) == name) return k;
  }
  return std::nullopt;
}

SlotChoice SlotAct(const SlotQModel::SlotValues& q, double eps, ExploreMode mode,
                   const std::vector<Tokens>& admissible, const SlotVocab& slots, SplitMix64& rng) {
  if (eps < 0 || eps > 1) throw std::invalid_argument("epsilon must lie in [0, 1]");
  if (mode == ExploreMode::kAdm && admissible.empty()) throw EmptyAdmissibleSet();
  SlotChoice out;
  if (eps > 0 && rng.Uniform() < eps) {
    out.random = true;
    if (mode == ExploreMode::kAdm) {
      out.action = admissible[rng.Below(admissible.size())];
      out.slots = slots.ToSlots(out.action);
      return out;
    }
    SlotAction a;
    for (int s = 0; s < kNumSlots; ++s) a[s] = rng.BelowInt(slots.size(s));
    out.slots = a;
    out.action = slots.FromSlots(a);
    return out;
  }
  SlotAction a;
  for (int s = 0; s < kNumSlots; ++s) a[s] = ArgMax(q[s]);
  out.slots = a;
  out.action = slots.FromSlots(a);
  return out;
}

ReplayBuffer::ReplayBuffer(std::size_t capacity, std::uint64_t seed) : capacity_(capacity), rng_(seed) {
  if (capacity == 0) throw std::invalid_argument("replay buffer capacity must be positive");
}

void ReplayBuffer::Add(Transition t) {
  if (items_.size() < capacity_) {
    items_.push_back(std::move(t));
  } else {
    items_[next_] = std::move(t);
  }
  next_ = (next_ + 1) % capacity_;
}

std::vector<const Transition*> ReplayBuffer::Sample(std::size_t n) {
  std::vector<const Transition*> out;
  if (items_.empty()) return out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(&items_[rng_.Below(items_.size())]);
  return out;
}

nlohmann::json DqnConfigToJson(const DqnConfig& c) {
  return {{"gamma", c.gamma},           {"buffer_capacity", c.buffer_capacity},
          {"batch_size", c.batch_size}, {"target_sync", c.target_sync},
          {"eps_start", c.eps_start},   {"eps_end", c.eps_end},
          {"eps_steps", c.eps_steps},   {"episodes", c.episodes},
          {"max_steps", c.max_steps},   {"update_every", c.update_every},
          {"learning_starts", c.learning_starts},
          {"adam", nn::AdamConfigToJson(c.adam)},
          {"seed", c.seed}};
}

DqnConfig DqnConfigFromJson(const nlohmann::json& j) {
  DqnConfig c;
  c.gamma = j.value("gamma", c.gamma);
  c.buffer_capacity = j.value("buffer_capacity", c.buffer_capacity);
  c.batch_size = j.value("batch_size", c.batch_size);
  c.target_sync = j.value("target_sync", c.target_sync);
  c.eps_start = j.value("eps_start", c.eps_start);
  c.eps_end = j.value("eps_end", c.eps_end);
  c.eps_steps = j.value("eps_steps", c.eps_steps);
  c.episodes = j.value("episodes", c.episodes);
  c.max_steps = j.value("max_steps", c.max_steps);
  c.update_every = j.value("update_every", c.update_every);
  c.learning_starts = j.value("learning_starts", c.learning_starts);
  if (j.contains("adam")) {
    const auto& a = j["adam"];
    c.adam.lr = a.value("lr", c.adam.lr);
    c.adam.beta1 = a.value("beta1", c.adam.beta1);
    c.adam.beta2 = a.value("beta2", c.adam.beta2);
    c.adam.eps = a.value("eps", c.adam.eps);
    c.adam.clip = a.value("clip", c.adam.clip);
  }
  c.seed = j.value("seed", c.seed);
  return c;
}

double EpsilonAt(const DqnConfig& c, std::int64_t step) {
  if (c.eps_steps <= 0) return c.eps_end;
  const double frac = std::min(1.0, static_cast<double>(step) / c.eps_steps);
  return c.eps_start + (c.eps_end - c.eps_start) * frac;
}

// ---- agent --------------------------------------------------------------------

Agent Agent::Create(AgentKind kind, const std::vector<const GameSpec*>& specs, RlConfig config,
                    const WordVectors* pretrained) {
  std::set<std::string> words;
  for (const GameSpec* s : specs) {
    for (const std::string& w : EngineVocabulary(*s)) words.insert(w);
  }
  Agent a;
  a.kind_ = kind;
  nn::Vocab vocab = nn::Vocab::Build(words);
  if (kind == AgentKind::kDrrn) {
    a.drrn_ = std::make_shared<DrrnModel>(std::move(vocab), config, pretrained);
  } else {
    a.slot_ = std::make_shared<SlotQModel>(std::move(vocab), SlotVocab::FromSpecs(specs), config, pretrained);
  }
  return a;
}

std::vector<int> Agent::EncodeObservation(const Observation& obs) const {
  return drrn_ ? drrn_->EncodeObservation(obs) : slot_->EncodeObservation(obs);
}

nn::ParameterStore& Agent::params() { return drrn_ ? drrn_->params() : slot_->params(); }

SlotChoice Agent::Act(const Observation& obs, const std::vector<Tokens>& admissible, double eps,
                      SplitMix64& rng) const {
  const std::vector<int> ids = EncodeObservation(obs);
  if (drrn_) {
    if (admissible.empty()) throw EmptyAdmissibleSet();
    SlotChoice out;
    if (eps > 0 && rng.Uniform() < eps) {
      out.random = true;
      out.action = admissible[rng.Below(admissible.size())];
      return out;
    }
    std::vector<std::vector<int>> acts;
    for (const Tokens& a : admissible) acts.push_back(drrn_->EncodeAction(a));
    out.action = admissible[static_cast<std::size_t>(ArgMax(drrn_->Scores(ids, acts)))];
    return out;
  }
  const ExploreMode mode = kind_ == AgentKind::kLstmDqnAdm ? ExploreMode::kAdm : ExploreMode::kFree;
  return SlotAct(slot_->QValues(ids), eps, mode, admissible, slot_->slots(), rng);
}

void Agent::Save(const std::filesystem::path& path, nlohmann::json extra) const {
  extra["agent"] = AgentName(kind_);
  if (drrn_) {
    drrn_->Save(path, std::move(extra));
  } else {
    slot_->Save(path, std::move(extra));
  }
}

Agent Agent::Load(const std::filesystem::path& path) {
  const nlohmann::json m = nn::LoadManifest(path);
  const auto kind = ParseAgentKind(m.value("agent", ""));
  if (!kind) throw nn::CheckpointError("checkpoint names no known agent");
  Agent a;
  a.kind_ = *kind;
  if (*kind == AgentKind::kDrrn) {
    a.drrn_ = std::make_shared<DrrnModel>(DrrnModel::Load(path));
  } else {
    a.slot_ = std::make_shared<SlotQModel>(SlotQModel::Load(path));
  }
  return a;
}

// ---- training ----------------------------------------------------------------

namespace {

using SlotTargets = std::array<double, kNumSlots>;

class SlotLearner {
 public:
  explicit SlotLearner(SlotQModel& model) : model_(model), target_(model.Clone()) {}

  void Sync() {
    target_->CopyValuesFrom(model_);
    cache_.clear();
  }

  double Update(const std::vector<const Transition*>& batch, double gamma) {
    double loss = 0;
    std::map<std::vector<int>, std::vector<std::pair<const Transition*, SlotTargets>>> groups;
    for (const Transition* t : batch) {
      if (!t->slots) continue;
      SlotTargets y;
      y.fill(t->reward);
      if (!t->done) {
        const SlotTargets& m = MaxNext(t->next_obs);
        for (int s = 0; s < kNumSlots; ++s) y[s] += gamma * m[s];
      }
      groups[t->obs].push_back({t, y});
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (const auto& [obs, items] : groups) {
      model_.Backprop(obs, [&](const SlotQModel::SlotValues& q) {
        SlotQModel::SlotValues dq;
        for (int s = 0; s < kNumSlots; ++s) dq[s] = Vector::Zero(q[s].size());
        for (const auto& [t, y] : items) {
          for (int s = 0; s < kNumSlots; ++s) {
            const int w = (*t->slots)[s];
            dq[s][w] += scale * (q[s][w] - y[s]);
            loss += scale * (q[s][w] - y[s]) * (q[s][w] - y[s]);
          }
        }
        return dq;
      });
    }
    return loss;
  }

 private:
  const SlotTargets& MaxNext(const std::vector<int>& obs) {
    auto it = cache_.find(obs);
    if (it != cache_.end()) return it->second;
    const SlotQModel::SlotValues q = target_->QValues(obs);
    SlotTargets m;
    for (int s = 0; s < kNumSlots; ++s) m[s] = q[s].maxCoeff();
    return cache_.emplace(obs, m).first->second;
  }

  SlotQModel& model_;
  std::unique_ptr<SlotQModel> target_;
  std::map<std::vector<int>, SlotTargets> cache_;
};

class DrrnLearner {
 public:
  explicit DrrnLearner(DrrnModel& model) : model_(model), target_(model.Clone()) {}

  void Sync() {
    target_->CopyValuesFrom(model_);
    cache_.clear();
  }

  double Update(const std::vector<const Transition*>& batch, double gamma) {
    double loss = 0;
    std::map<std::vector<int>, std::vector<std::pair<const Transition*, double>>> groups;
    for (const Transition* t : batch) {
      double y = t->reward;
      if (!t->done && !t->next_admissible.empty()) y += gamma * MaxNext(t->next_obs, t->next_admissible);
      groups[t->obs].push_back({t, y});
    }
    const double scale = 1.0 / static_cast<double>(batch.size());
    for (const auto& [obs, items] : groups) {
      std::vector<std::vector<int>> actions;
      for (const auto& item : items) actions.push_back(item.first->action_ids);
      model_.Backprop(obs, actions, [&](const Vector& s) {
        Vector ds(s.size());
        for (std::size_t i = 0; i < items.size(); ++i) {
          const double e = s[static_cast<Eigen::Index>(i)] - items[i].second;
          ds[static_cast<Eigen::Index>(i)] = scale * e;
          loss += scale * e * e;
        }
        return ds;
      });
    }
    return loss;
  }

 private:
  double MaxNext(const std::vector<int>& obs, const std::vector<std::vector<int>>& admissible) {
    auto key = std::make_pair(obs, admissible);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    const double m = target_->Scores(obs, admissible).maxCoeff();
    cache_.emplace(std::move(key), m);
    return m;
  }

  DrrnModel& model_;
  std::unique_ptr<DrrnModel> target_;
  std::map<std::pair<std::vector<int>, std::vector<std::vector<int>>>, double> cache_;
};

}  // namespace

struct TdLearner::Impl {
  std::unique_ptr<SlotLearner> slot;
  std::unique_ptr<DrrnLearner> drrn;
};

TdLearner::TdLearner(Agent& agent, nn::AdamConfig adam, double gamma)
    : agent_(agent), adam_(adam), gamma_(gamma), impl_(std::make_unique<Impl>()) {
  if (agent.drrn()) {
    impl_->drrn = std::make_unique<DrrnLearner>(*agent.drrn());
  } else {
    impl_->slot = std::make_unique<SlotLearner>(*agent.slot());
  }
}

TdLearner::~TdLearner() = default;

void TdLearner::SyncTarget() {
  if (impl_->drrn) impl_->drrn->Sync();
  if (impl_->slot) impl_->slot->Sync();
}

double TdLearner::Step(const std::vector<const Transition*>& batch) {
  if (batch.empty()) return 0;
  agent_.params().ZeroGrad();
  const double loss = impl_->drrn ? impl_->drrn->Update(batch, gamma_) : impl_->slot->Update(batch, gamma_);
  bool any = false;
  for (const nn::Parameter* p : agent_.params().All()) any = any || (p->trainable && p->has_grad());
  if (any) {
    adam_.Step(agent_.params());
    ++updates_;
  }
  return loss;
}

DqnResult DqnTrain(Agent& agent, const std::vector<std::shared_ptr<const GameSpec>>& games,
                   const DqnConfig& config) {
  if (games.empty()) throw std::invalid_argument("dqn training needs at least one game");
  DqnResult result;
  SplitMix64 rng(DeriveSeed(config.seed, "dqn-act"));
  ReplayBuffer buffer(config.buffer_capacity, DeriveSeed(config.seed, "dqn-replay"));
  TdLearner learner(agent, config.adam, config.gamma);
  const std::size_t batch = static_cast<std::size_t>(std::max(1, config.batch_size));
  const std::int64_t starts = config.learning_starts > 0 ? config.learning_starts : static_cast<std::int64_t>(batch);
  const auto encode_all = [&](const std::vector<Tokens>& acts) {
    std::vector<std::vector<int>> out;
    if (agent.drrn()) {
      for (const Tokens& a : acts) out.push_back(agent.drrn()->EncodeAction(a));
    }
    return out;
  };

  for (int ep = 0; ep < config.episodes; ++ep) {
    TextGame game(games[static_cast<std::size_t>(ep) % games.size()]);
    const Observation* obs = &game.Reset();
    std::vector<Tokens> admissible = game.AdmissibleActions();
    std::vector<int> ids = agent.EncodeObservation(*obs);
    double score = 0;
    for (int t = 0; t < config.max_steps && !game.state().done; ++t) {
      const double eps = EpsilonAt(config, result.env_steps);
      SlotChoice choice = agent.Act(*obs, admissible, eps, rng);
      const TextGame::Outcome out = game.Step(choice.action);
      ++result.env_steps;
      score += out.reward;
      obs = &game.observation();
      std::vector<Tokens> next_adm = game.AdmissibleActions();
      std::vector<int> next_ids = agent.EncodeObservation(*obs);

      Transition tr;
      tr.obs = ids;
      tr.action = choice.action;
      tr.slots = choice.slots;
      if (agent.drrn()) tr.action_ids = agent.drrn()->EncodeAction(choice.action);
      tr.reward = out.reward;
      tr.next_obs = next_ids;
      tr.done = out.done;
      tr.next_admissible = encode_all(next_adm);
      buffer.Add(std::move(tr));

      if (result.env_steps >= starts && result.env_steps % std::max(1, config.update_every) == 0) {
        learner.Step(buffer.Sample(batch));
      }
      if (config.target_sync > 0 && result.env_steps % config.target_sync == 0) learner.SyncTarget();
      ids = std::move(next_ids);
      admissible = std::move(next_adm);
    }
    result.episode_scores.push_back(score);
  }
  result.updates = learner.updates();
  return result;
}

EpisodeResult PlayGreedy(const Agent& agent, std::shared_ptr<const GameSpec> spec, int max_steps) {
  TextGame game(spec);
  SplitMix64 rng(0);
  EpisodeResult r;
  r.max_score = spec->max_score;
  game.Reset();
  while (!game.state().done && r.steps < max_steps) {
    const std::vector<Tokens> adm = game.AdmissibleActions();
    SlotChoice c = agent.Act(game.observation(), adm, 0.0, rng);
    game.Step(c.action);
    r.actions.push_back(std::move(c.action));
    ++r.steps;
  }
  r.score = game.state().cumulative_reward;
  r.win = r.max_score > 0 && r.score >= r.max_score;
  return r;
}

EpisodeResult PlayRandom(std::shared_ptr<const GameSpec> spec, std::uint64_t seed, int max_steps) {
  TextGame game(spec);
  SplitMix64 rng(DeriveSeed(seed, "random-policy:" + spec->game_id));
  EpisodeResult r;
  r.max_score = spec->max_score;
  game.Reset();
  while (!game.state().done && r.steps < max_steps) {
    const std::vector<Tokens> adm = game.AdmissibleActions();
    if (adm.empty()) break;
    Tokens a = adm[rng.Below(adm.size())];
    game.Step(a);
    r.actions.push_back(std::move(a));
    ++r.steps;
  }
  r.score = game.state().cumulative_reward;
  r.win = r.max_score > 0 && r.score >= r.max_score;
  return r;
}

}  // namespace gotext::rl

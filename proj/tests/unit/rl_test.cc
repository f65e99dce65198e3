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

#include <algorithm>
#include <set>

#include "doctest.h"
#include "gotext/engine/generator.h"
#include "gotext/nn/gradcheck.h"
#include "gotext/rl/dqn.h"

namespace gotext::rl {
namespace {

std::shared_ptr<const GameSpec> Cooking(SkillConfig s, std::uint64_t seed) {
  return std::make_shared<const GameSpec>(GenerateCookingGame(s, seed));
}

RlConfig Tiny(int dim = 8) {
  RlConfig c;
  c.emb_dim = c.hidden = dim;
  c.seed = 1;
  return c;
}

TEST_CASE("slot vocabulary covers the grammar") {
  auto spec = Cooking({3, 3, true, true, true, true, 12}, 1000);
  SlotVocab v = SlotVocab::FromSpecs({spec.get()});
  for (const char* verb : {"go", "look", "examine", "inventory", "eat", "open", "close", "take", "drop",
                           "put", "insert", "cook", "slice", "chop", "dice", "prepare"}) {
    CHECK(v.Index(kVerb, verb) > 0);
  }
  for (int s = 0; s < kNumSlots; ++s) CHECK(v.words(s)[0] == "<s>");
  auto coin = std::make_shared<const GameSpec>(GenerateCoinGame(3, 1));
  SlotVocab cv = SlotVocab::FromSpecs({coin.get()});
  CHECK(cv.size(kVerb) == 4);
  CHECK(cv.Index(kNoun1, "coin") > 0);
}

TEST_CASE("every admissible action round-trips through the slot template") {
  for (std::uint64_t seed : {1000, 1001, 1002}) {
    auto spec = Cooking({3, 3, true, true, true, true, 12}, seed);
    SlotVocab v = SlotVocab::FromSpecs({spec.get()});
    TextGame game(spec);
    SplitMix64 rng(seed);
    for (int episode = 0; episode < 5; ++episode) {
      game.Reset();
      while (!game.state().done) {
        const auto adm = game.AdmissibleActions();
        for (const Tokens& a : adm) {
          const auto slots = v.ToSlots(a);
          REQUIRE_MESSAGE(slots.has_value(), JoinTokens(a));
          CHECK(v.FromSlots(*slots) == a);
        }
        game.Step(adm[rng.Below(adm.size())]);
      }
    }
  }
  SlotVocab v = SlotVocab::FromSpecs({Cooking({1, 0, false, false, false, false, 1}, 1).get()});
  CHECK_FALSE(v.ToSlots({}).has_value());
  CHECK_FALSE(v.ToSlots({"take", "a", "b", "c"}).has_value());
  CHECK_FALSE(v.ToSlots({"fly", "north"}).has_value());
}

TEST_CASE("slot q-values") {
  auto spec = Cooking({1, 1, false, false, false, false, 1}, 1000);
  Agent agent = Agent::Create(AgentKind::kLstmDqn, {spec.get()}, Tiny());
  SlotQModel& m = *agent.slot();
  TextGame game(spec);
  const auto ids = m.EncodeObservation(game.observation());
  auto q = m.QValues(ids);
  for (int s = 0; s < kNumSlots; ++s) CHECK(q[s].size() == m.slots().size(s));
  for (int s = 0; s < kNumSlots; ++s) m.head(s).w->value.setZero();
  q = m.QValues(ids);
  for (int s = 0; s < kNumSlots; ++s) CHECK(q[s].isZero(0));
}

TEST_CASE("q-model gradient checks") {
  CHECK(SlotModelGradientCheck(100, 5) < nn::kGradCheckTolerance);
  CHECK(DrrnGradientCheck(100, 5) < nn::kGradCheckTolerance);
}

TEST_CASE("slot act") {
  std::array<std::set<std::string>, kNumSlots> words;
  words[kVerb] = {"take", "go"};
  words[kNoun1] = {"coin", "north"};
  SlotVocab v = SlotVocab::FromWords(words);
  SlotQModel::SlotValues q;
  for (int s = 0; s < kNumSlots; ++s) q[s] = Vector::Zero(v.size(s));
  q[kVerb][v.Index(kVerb, "take")] = 2.0;
  q[kNoun1][v.Index(kNoun1, "coin")] = 1.0;
  SplitMix64 rng(1);
  SlotChoice c = SlotAct(q, 0.0, ExploreMode::kFree, {}, v, rng);
  CHECK(c.action == Tokens{"take", "coin"});
  CHECK_FALSE(c.random);

  const std::vector<Tokens> adm = {{"go", "north"}, {"take", "coin"}};
  for (int i = 0; i < 200; ++i) {
    SlotChoice r = SlotAct(q, 1.0, ExploreMode::kAdm, adm, v, rng);
    CHECK(std::find(adm.begin(), adm.end(), r.action) != adm.end());
  }
  CHECK_THROWS_AS(SlotAct(q, 1.0, ExploreMode::kAdm, {}, v, rng), EmptyAdmissibleSet);
  CHECK_THROWS_AS(SlotAct(q, 1.5, ExploreMode::kFree, {}, v, rng), std::invalid_argument);
}

TEST_CASE("free exploration rarely produces admissible commands") {
  auto spec = Cooking({2, 1, false, true, true, false, 6}, 1000);
  SlotVocab v = SlotVocab::FromSpecs({spec.get()});
  TextGame game(spec);
  const auto adm = game.AdmissibleActions();
  SlotQModel::SlotValues q;
  for (int s = 0; s < kNumSlots; ++s) q[s] = Vector::Zero(v.size(s));
  SplitMix64 rng(42);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    SlotChoice c = SlotAct(q, 1.0, ExploreMode::kFree, adm, v, rng);
    hits += std::find(adm.begin(), adm.end(), c.action) != adm.end();
  }
  CHECK(hits < 50);
}

TEST_CASE("drrn scores") {
  nn::Vocab vocab = nn::Vocab::Build({"take", "coin", "go", "north"});
  DrrnModel m(vocab, Tiny(6));
  const std::vector<int> obs = {6, 7, 8};
  const auto take = m.EncodeAction({"take", "coin"});
  const auto go = m.EncodeAction({"go", "north"});
  Vector s = m.Scores(obs, {take, go, take});
  CHECK(s[0] == s[2]);
  Vector s2 = m.Scores(obs, {take, go});
  CHECK(ArgMax(s) == ArgMax(s2));
  CHECK(s2[0] == s[0]);
  CHECK_THROWS_AS(m.Scores(obs, {}), EmptyAdmissibleSet);
  m.params().Get("embedding").value.setZero();
  Vector z = m.Scores(obs, {go, take});
  CHECK(z.isZero(0));
  CHECK(ArgMax(z) == 0);
  CHECK_THROWS_AS(DrrnModel(vocab, RlConfig{.emb_dim = 4, .hidden = 5}), nn::ShapeMismatch);
}

TEST_CASE("replay buffer") {
  ReplayBuffer buf(3, 9);
  CHECK(buf.Sample(4).empty());
  for (int i = 0; i < 5; ++i) {
    Transition t;
    t.reward = i;
    buf.Add(t);
  }
  CHECK(buf.size() == 3);
  std::set<double> held;
  for (std::size_t i = 0; i < buf.size(); ++i) held.insert(buf.at(i).reward);
  CHECK(held == std::set<double>{2, 3, 4});
  for (const Transition* t : buf.Sample(100)) CHECK(held.count(t->reward) == 1);
  CHECK_THROWS(ReplayBuffer(0, 1));
}

TEST_CASE("td learning with gamma 0 converges to the reward") {
  auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(1, 2));
  for (AgentKind kind : {AgentKind::kLstmDqnAdm, AgentKind::kDrrn}) {
    Agent agent = Agent::Create(kind, {spec.get()}, Tiny());
    TextGame game(spec);
    Transition t;
    t.obs = agent.EncodeObservation(game.observation());
    t.action = {"take", "coin"};
    if (agent.slot()) t.slots = agent.slot()->slots().ToSlots(t.action);
    if (agent.drrn()) t.action_ids = agent.drrn()->EncodeAction(t.action);
    t.reward = 1;
    t.next_obs = t.obs;
    t.done = false;
    if (agent.drrn()) t.next_admissible = {t.action_ids};
    TdLearner learner(agent, nn::AdamConfig{.lr = 0.01}, 0.0);
    for (int i = 0; i < 400; ++i) learner.Step({&t});
    if (agent.drrn()) {
      CHECK(agent.drrn()->Scores(t.obs, {t.action_ids})[0] == doctest::Approx(1.0).epsilon(1e-3));
    } else {
      const auto q = agent.slot()->QValues(t.obs);
      for (int s = 0; s < kNumSlots; ++s) CHECK(q[s][(*t.slots)[s]] == doctest::Approx(1.0).epsilon(1e-3));
    }
  }
}

TEST_CASE("adm agent learns the level-1 coin game") {
  auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(1, 4));
  Agent agent = Agent::Create(AgentKind::kLstmDqnAdm, {spec.get()}, Tiny(16));
  DqnConfig c;
  c.episodes = 500;
  c.batch_size = 16;
  c.eps_steps = 300;
  c.target_sync = 100;
  c.adam.lr = 0.003;
  DqnResult r = DqnTrain(agent, {spec}, c);
  REQUIRE(r.episode_scores.size() == 500);
  int wins = 0;
  for (double s : r.episode_scores) wins += s >= 1;
  CHECK(wins > 450);
  EpisodeResult e = PlayGreedy(agent, spec);
  CHECK(e.win);
  CHECK(e.steps == 1);
}

TEST_CASE("dqn training is deterministic") {
  auto spec = Cooking({1, 1, false, false, false, false, 1}, 1001);
  for (AgentKind kind : {AgentKind::kLstmDqn, AgentKind::kDrrn}) {
    DqnConfig c;
    c.episodes = 4;
    c.batch_size = 4;
    c.max_steps = 20;
    c.target_sync = 10;
    auto run = [&] {
      Agent a = Agent::Create(kind, {spec.get()}, Tiny());
      DqnResult r = DqnTrain(a, {spec}, c);
      return std::make_pair(r.episode_scores, a.params().Get("encoder.wx").value);
    };
    const auto a = run();
    const auto b = run();
    CHECK(a.first == b.first);
    CHECK(a.second == b.second);
  }
  CHECK(EpsilonAt(DqnConfig{}, 0) == 1.0);
  CHECK(EpsilonAt(DqnConfig{}, 5000) == doctest::Approx(0.55));
  CHECK(EpsilonAt(DqnConfig{}, 20000) == doctest::Approx(0.1));
}

TEST_CASE("agent checkpoints") {
  const auto dir = std::filesystem::temp_directory_path() / "gotext_rl_test";
  std::filesystem::remove_all(dir);
  auto spec = Cooking({1, 1, false, false, false, false, 1}, 1000);
  for (AgentKind kind : {AgentKind::kLstmDqn, AgentKind::kLstmDqnAdm, AgentKind::kDrrn}) {
    Agent a = Agent::Create(kind, {spec.get()}, Tiny());
    const auto path = dir / (std::string(AgentName(kind)) + ".bin");
    a.Save(path);
    Agent b = Agent::Load(path);
    CHECK(b.kind() == kind);
    CHECK(PlayGreedy(a, spec).actions == PlayGreedy(b, spec).actions);
  }
  CHECK(ParseAgentKind("drrn") == AgentKind::kDrrn);
  CHECK_FALSE(ParseAgentKind("dqn++").has_value());
  std::filesystem::remove_all(dir);
}

TEST_CASE("random policy") {
  auto spec = Cooking({1, 0, false, false, false, false, 1}, 1000);
  EpisodeResult a = PlayRandom(spec, 3), b = PlayRandom(spec, 3);
  CHECK(a.actions == b.actions);
  CHECK(a.steps <= kMaxEpisodeSteps);
}

}  // namespace
}  // namespace gotext::rl

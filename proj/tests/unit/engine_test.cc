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
#include <memory>
#include <set>

#include "doctest.h"
#include "gotext/engine/engine.h"
#include "gotext/engine/generator.h"
#include "gotext/engine/oracle.h"
#include "gotext/engine/rng.h"

namespace gotext {
namespace {

std::shared_ptr<const GameSpec> Share(GameSpec spec) {
  return std::make_shared<const GameSpec>(std::move(spec));
}

bool Contains(const std::vector<Tokens>& actions, std::string_view text) {
  const Tokens wanted = Tokenize(text);
  return std::find(actions.begin(), actions.end(), wanted) != actions.end();
}

EntityId AddEntity(GameSpec& spec, std::string_view name, EntityKind kind, bool portable) {
  Entity e;
  e.id = static_cast<EntityId>(spec.entities.size());
  e.name = Tokenize(name);
  e.kind = kind;
  e.portable = portable;
  if (kind == EntityKind::kIngredient || kind == EntityKind::kFood) {
    e.states = StateBit(ItemState::kRaw);
  }
  spec.entities.push_back(e);
  return e.id;
}

// The garden / kitchen situation shown in the observation example table: a
// roasted red apple and a red onion on the garden floor, black pepper held, an
// open screen door to the north.
GameSpec TableOneSpec() {
  GameSpec spec;
  spec.game_id = "table-one";
  spec.family = Family::kCooking;
  spec.skills = {2, 1, true, true, true, false, 6};
  spec.rooms.resize(2);
  spec.rooms[0].id = 0;
  spec.rooms[0].name = {"garden"};
  spec.rooms[1].id = 1;
  spec.rooms[1].name = {"kitchen"};
  spec.rooms[0].exits[Direction::kNorth] = 1;
  spec.rooms[1].exits[Direction::kSouth] = 0;
  const Door door{0, {"screen", "door"}, true};
  spec.rooms[0].doors[Direction::kNorth] = door;
  spec.rooms[1].doors[Direction::kSouth] = door;
  spec.start_room = 0;
  spec.kitchen_room = 1;

  const EntityId apple = AddEntity(spec, "red apple", EntityKind::kIngredient, true);
  spec.entities[apple].states = StateBit(ItemState::kRoasted);
  const EntityId onion = AddEntity(spec, "red onion", EntityKind::kFood, true);
  const EntityId pepper = AddEntity(spec, "black pepper", EntityKind::kIngredient, true);
  const EntityId counter = AddEntity(spec, "counter", EntityKind::kContainer, false);
  spec.entities[counter].supporter = true;
  const EntityId oven = AddEntity(spec, "oven", EntityKind::kTool, false);
  spec.entities[oven].role = ToolRole::kOven;
  const EntityId knife = AddEntity(spec, "knife", EntityKind::kTool, true);
  spec.entities[knife].role = ToolRole::kSharp;
  spec.meal = AddEntity(spec, "meal", EntityKind::kFood, true);
  spec.entities[spec.meal].states = 0;

  spec.rooms[0].entities = {apple, onion};
  spec.rooms[1].entities = {counter, oven};
  spec.entities[counter].contents = {knife};
  spec.inventory = {pepper};
  spec.recipe.ingredients = {pepper, apple};
  spec.recipe.directions = {{apple, Operation::kChop}, {apple, Operation::kRoast}};
  spec.max_score = static_cast<int>(ScoringEvents(spec).size());
  return spec;
}

// One kitchen, red apple held raw, oven and knife available.
GameSpec KitchenSpec(Operation required) {
  GameSpec spec;
  spec.game_id = "kitchen";
  spec.family = Family::kCooking;
  spec.skills = {1, 0, false, true, true, false, 1};
  spec.rooms.resize(1);
  spec.rooms[0].name = {"kitchen"};
  spec.kitchen_room = 0;
  const EntityId apple = AddEntity(spec, "red apple", EntityKind::kIngredient, true);
  const EntityId oven = AddEntity(spec, "oven", EntityKind::kTool, false);
  spec.entities[oven].role = ToolRole::kOven;
  const EntityId knife = AddEntity(spec, "knife", EntityKind::kTool, true);
  spec.entities[knife].role = ToolRole::kSharp;
  spec.meal = AddEntity(spec, "meal", EntityKind::kFood, true);
  spec.rooms[0].entities = {oven};
  spec.inventory = {apple, knife};
  spec.recipe.ingredients = {apple};
  spec.recipe.directions = {{apple, required}};
  spec.max_score = static_cast<int>(ScoringEvents(spec).size());
  return spec;
}

// Coin in a hub room with four neighbours.
GameSpec HubCoinSpec() {
  GameSpec spec;
  spec.game_id = "hub";
  spec.family = Family::kCoin;
  spec.level = 1;
  spec.rooms.resize(5);
  for (int i = 0; i < 5; ++i) {
    spec.rooms[i].id = i;
    spec.rooms[i].name = {"room", std::string(1, static_cast<char>('a' + i))};
  }
  int next = 1;
  for (Direction d : kAllDirections) {
    spec.rooms[0].exits[d] = next;
    spec.rooms[next].exits[Opposite(d)] = 0;
    ++next;
  }
  spec.coin = AddEntity(spec, "coin", EntityKind::kCoin, true);
  spec.entities[spec.coin].states = 0;
  spec.rooms[0].entities = {spec.coin};
  spec.coin_room = 0;
  spec.max_score = 1;
  return spec;
}

std::vector<SkillConfig> SampleSkills() {
  return {{1, 0, false, false, false, false, 1}, {1, 1, true, false, true, false, 6},
          {2, 2, false, true, false, true, 6},   {3, 3, true, true, true, true, 12},
          {3, 1, false, true, true, false, 9},   {2, 0, true, false, false, true, 1}};
}

}  // namespace

TEST_CASE("splitmix64 matches the reference sequence") {
  // Reference values for seed 1234567 from the published C implementation.
  SplitMix64 rng(1234567);
  CHECK(rng.Next() == 6457827717110365317ULL);
  CHECK(rng.Next() == 3203168211198807973ULL);
  CHECK(rng.Next() == 9817491932198370423ULL);
}

TEST_CASE("tokenizer lowercases and strips punctuation") {
  CHECK(Tokenize("-= Garden =- You're IN the sliding-patio door.") ==
        Tokens{"garden", "you", "re", "in", "the", "sliding", "patio", "door"});
  CHECK(Tokenize("").empty());
}

TEST_CASE("coin game construction") {
  SUBCASE("level 1 puts the coin in the start room") {
    const GameSpec spec = GenerateCoinGame(1, 7);
    ValidateSpec(spec);
    CHECK(spec.coin_room == spec.start_room);
    CHECK(spec.rooms.size() == 3);
    CHECK(BfsShortestWin(spec) == 1);
  }
  SUBCASE("level 5") {
    const GameSpec spec = GenerateCoinGame(5, 7);
    ValidateSpec(spec);
    CHECK(RoomDistance(spec, spec.start_room, spec.coin_room) == 4);
    CHECK(BfsShortestWin(spec) == 5);
    CHECK(SpecToJson(spec) == SpecToJson(GenerateCoinGame(5, 7)));
    CHECK(SpecToJson(spec) != SpecToJson(GenerateCoinGame(5, 8)));
  }
  SUBCASE("level 30 needs exactly 30 commands") {
    const GameSpec spec = GenerateCoinGame(30, 11);
    ValidateSpec(spec);
    CHECK(spec.rooms.size() == 90);
    CHECK(spec.max_score == 1);
    CHECK(BfsShortestWin(spec) == 30);
  }
  SUBCASE("every path room has two distractors") {
    const GameSpec spec = GenerateCoinGame(8, 2);
    for (int r = 0; r < 8; ++r) {
      int dead_ends = 0;
      for (const auto& [dir, next] : spec.rooms[r].exits) {
        if (next >= 8) ++dead_ends;
      }
      CHECK(dead_ends == 2);
    }
  }
  CHECK_THROWS_AS(GenerateCoinGame(0, 1), SpecError);
}

TEST_CASE("cooking game construction") {
  SUBCASE("minimal skills win with prepare meal, eat meal") {
    const SkillConfig skills{1, 0, false, false, false, false, 1};
    const GameSpec spec = GenerateCookingGame(skills, 3);
    ValidateSpec(spec);
    CHECK(spec.rooms.size() == 1);
    CHECK(spec.max_score == 2);
    const std::vector<Tokens> win = BfsWinningActions(spec);
    REQUIRE(win.size() == 2);
    CHECK(win[0] == Tokens{"prepare", "meal"});
    CHECK(win[1] == Tokens{"eat", "meal"});
  }
  SUBCASE("hardest skills") {
    const SkillConfig skills{3, 3, true, true, true, true, 12};
    const GameSpec spec = GenerateCookingGame(skills, 3);
    ValidateSpec(spec);
    CHECK(spec.rooms.size() == 12);
    for (EntityId id : spec.recipe.ingredients) {
      CHECK(std::find(spec.inventory.begin(), spec.inventory.end(), id) == spec.inventory.end());
    }
    CHECK(spec.max_score >= 3 + 2 + 2);
    CHECK(SpecToJson(spec) == SpecToJson(GenerateCookingGame(skills, 3)));
  }
  SUBCASE("closed containers and doors iff open skill") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const GameSpec closed = GenerateCookingGame({2, 1, true, false, false, false, 6}, seed);
      const GameSpec open = GenerateCookingGame({2, 1, false, false, false, false, 6}, seed);
      bool any_closed = false;
      for (const Room& room : closed.rooms) any_closed |= !room.doors.empty();
      CHECK(any_closed);
      for (const Room& room : open.rooms) CHECK(room.doors.empty());
      for (const Entity& e : open.entities) CHECK(e.is_open);
    }
  }
  CHECK_THROWS_AS(GenerateCookingGame({1, 2, false, false, false, false, 1}, 1), SpecError);
  CHECK_THROWS_AS(GenerateCookingGame({1, 0, false, false, false, false, 5}, 1), SpecError);
}

TEST_CASE("spec json round trip over random specs") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    GameSpec spec;
    if (trial % 3 == 0) {
      spec = GenerateCoinGame(1 + rng.BelowInt(20), rng.Next());
    } else {
      const auto skills = SampleSkills();
      spec = GenerateCookingGame(skills[rng.Below(skills.size())], rng.Next());
    }
    const GameSpec back = SpecFromJson(SpecToJson(spec));
    CHECK(back == spec);
  }
  CHECK_THROWS_AS(SpecFromJson("{\"schema_version\": 99}"), SpecError);
  CHECK_THROWS_AS(SpecFromJson("not json"), SpecError);
}

TEST_CASE("skill labels round trip") {
  for (const SkillConfig& skills : SampleSkills()) {
    CHECK(SkillConfig::FromLabel(skills.Label()) == skills);
  }
}

TEST_CASE("reset") {
  SUBCASE("coin") {
    auto spec = Share(GenerateCoinGame(3, 1));
    auto [state, obs] = Reset(spec);
    CHECK(state.step_count == 0);
    CHECK(state.cumulative_reward == 0);
    CHECK_FALSE(state.done);
    CHECK(obs.prev_action.empty());
    CHECK(obs.feedback.empty());
    CHECK(std::find(obs.description.begin(), obs.description.end(), "exit") != obs.description.end());
    auto [state2, obs2] = Reset(spec);
    CHECK(state == state2);
    CHECK(obs == obs2);
  }
  SUBCASE("cooking quest") {
    auto [state, obs] = Reset(Share(TableOneSpec()));
    const Tokens prefix = Tokenize("gather all following ingredients");
    REQUIRE(obs.quest.size() > prefix.size());
    CHECK(Tokens(obs.quest.begin(), obs.quest.begin() + 4) == prefix);
    CHECK(JoinTokens(obs.description) ==
          "garden you are in the garden there is a roasted red apple on the floor there is a "
          "red onion on the floor there is an open screen door leading north");
    CHECK(JoinTokens(obs.inventory) == "you are carrying a black pepper");
  }
}

TEST_CASE("parser") {
  auto spec = Share(KitchenSpec(Operation::kRoast));
  GameState state = InitialState(spec);

  SUBCASE("cook X with Y") {
    const ParseResult r = ParseCommand(Tokenize("cook red apple with oven"), state);
    REQUIRE(std::holds_alternative<Command>(r));
    const Command& c = std::get<Command>(r);
    CHECK(c.verb == Verb::kCook);
    CHECK(c.object == Target{Target::Kind::kEntity, 0});
    CHECK(c.instrument == Target{Target::Kind::kEntity, 1});
    const StepResult step = Step(state, Tokenize("cook red apple with oven"));
    CHECK((step.state.entity_states[0] & StateBit(ItemState::kRoasted)));
    CHECK(step.reward == 1);
  }
  SUBCASE("unknown verb") {
    const ParseResult r = ParseCommand(Tokenize("fly to moon"), state);
    REQUIRE(std::holds_alternative<ParseError>(r));
    CHECK(std::get<ParseError>(r) == ParseError{ParseError::Kind::kUnknownVerb, 0, 1});
  }
  SUBCASE("unknown entity") {
    const ParseResult r = ParseCommand(Tokenize("take green apple"), state);
    CHECK(std::get<ParseError>(r) == ParseError{ParseError::Kind::kUnknownEntity, 1, 3});
    const ParseResult partial = ParseCommand(Tokenize("take apple"), state);
    CHECK(std::get<ParseError>(partial).kind == ParseError::Kind::kUnknownEntity);
  }
  SUBCASE("malformed") {
    for (const char* text : {"go", "go up", "cook red apple", "cook with oven", "look around",
                             "prepare dinner", "take"}) {
      const ParseResult r = ParseCommand(Tokenize(text), state);
      REQUIRE(std::holds_alternative<ParseError>(r));
      CHECK(std::get<ParseError>(r).kind == ParseError::Kind::kMalformedPattern);
    }
  }
  SUBCASE("take coin") {
    auto coin = Share(GenerateCoinGame(1, 7));
    GameState s = InitialState(coin);
    const ParseResult r = ParseCommand(Tokenize("take coin"), s);
    REQUIRE(std::holds_alternative<Command>(r));
    CHECK(std::get<Command>(r).verb == Verb::kTake);
    CHECK(std::get<Command>(r).object.id == coin->coin);
    CHECK(std::get<ParseError>(ParseCommand(Tokenize("examine coin"), s)).kind ==
          ParseError::Kind::kUnknownVerb);
  }
}

TEST_CASE("step") {
  SUBCASE("taking the coin wins") {
    auto spec = Share(GenerateCoinGame(1, 7));
    GameState s = InitialState(spec);
    const StepResult r = Step(s, Tokenize("take coin"));
    CHECK(r.reward == 1);
    CHECK(r.done);
    CHECK(r.state.won);
    CHECK_THROWS_AS(Step(r.state, Tokenize("look")), SteppingFinishedGame);
  }
  SUBCASE("blocked direction") {
    auto spec = Share(KitchenSpec(Operation::kSlice));
    const StepResult r = Step(InitialState(spec), Tokenize("go west"));
    CHECK(r.reward == 0);
    CHECK_FALSE(r.done);
    CHECK(r.observation.feedback == Tokenize("you can't go that way"));
    CHECK(r.observation.prev_action == Tokenize("go west"));
    CHECK(r.state.step_count == 1);
  }
  SUBCASE("slicing a required ingredient scores") {
    auto spec = Share(KitchenSpec(Operation::kSlice));
    const StepResult r = Step(InitialState(spec), Tokenize("slice red apple with knife"));
    CHECK(r.reward == 1);
    CHECK((r.state.entity_states[0] & StateBit(ItemState::kSliced)));
    const StepResult again = Step(r.state, Tokenize("slice red apple with knife"));
    CHECK(again.reward == 0);
    CHECK(again.observation.feedback == Tokenize("that's already cut"));
  }
  SUBCASE("wrong processing loses") {
    auto spec = Share(KitchenSpec(Operation::kSlice));
    const StepResult r = Step(InitialState(spec), Tokenize("dice red apple with knife"));
    CHECK(r.done);
    CHECK_FALSE(r.state.won);
    CHECK(r.reward == 0);
  }
  SUBCASE("eating a recipe ingredient loses") {
    auto spec = Share(KitchenSpec(Operation::kSlice));
    const StepResult r = Step(InitialState(spec), Tokenize("eat red apple"));
    CHECK(r.done);
    CHECK_FALSE(r.state.won);
    CHECK(r.reward == 0);
  }
  SUBCASE("full recipe") {
    auto spec = Share(KitchenSpec(Operation::kRoast));
    GameState s = InitialState(spec);
    CHECK(StepInPlace(s, Tokenize("prepare meal")) == 0);
    CHECK(StepInPlace(s, Tokenize("cook red apple with oven")) == 1);
    CHECK(StepInPlace(s, Tokenize("prepare meal")) == 1);
    CHECK(StepInPlace(s, Tokenize("eat meal")) == 1);
    CHECK(s.done);
    CHECK(s.won);
    CHECK(s.cumulative_reward == spec->max_score);
  }
  SUBCASE("step cap") {
    auto spec = Share(GenerateCoinGame(4, 3));
    GameState s = InitialState(spec);
    for (int i = 0; i < kMaxEpisodeSteps; ++i) {
      CHECK_FALSE(s.done);
      StepInPlace(s, Tokenize("look"));
    }
    CHECK(s.done);
    CHECK(s.step_count == kMaxEpisodeSteps);
  }
  SUBCASE("capacity with drop skill") {
    const GameSpec spec = GenerateCookingGame({1, 1, false, false, false, true, 1}, 5);
    GameState s = InitialState(Share(spec));
    CHECK(static_cast<int>(s.inventory.size()) == kDropCapacity);
    Tokens take{"take"};
    AppendTokens(take, spec.entity(spec.recipe.ingredients[0]).name);
    const ParseResult parsed = ParseCommand(take, s);
    if (const auto* c = std::get_if<Command>(&parsed)) {
      CHECK(CheckPreconditions(*c, s).has_value());
    }
  }
}

TEST_CASE("admissible actions") {
  SUBCASE("table one state") {
    const std::vector<Tokens> actions = AdmissibleActions(InitialState(Share(TableOneSpec())));
    for (const char* expected : {"drop black pepper", "eat black pepper", "examine red apple",
                                 "examine red onion", "go north", "look", "take red apple",
                                 "take red onion"}) {
      CHECK_MESSAGE(Contains(actions, expected), expected);
    }
    CHECK_FALSE(Contains(actions, "inventory"));
    CHECK(std::is_sorted(actions.begin(), actions.end(), [](const Tokens& a, const Tokens& b) {
      return JoinTokens(a) < JoinTokens(b);
    }));
  }
  SUBCASE("hub coin room") {
    const std::vector<Tokens> actions = AdmissibleActions(InitialState(Share(HubCoinSpec())));
    CHECK(actions.size() == 6);
  }
  SUBCASE("finished game") {
    auto spec = Share(GenerateCoinGame(1, 7));
    const StepResult r = Step(InitialState(spec), Tokenize("take coin"));
    CHECK(AdmissibleActions(r.state).empty());
  }
}

TEST_CASE("oracle limits") {
  const GameSpec spec = GenerateCookingGame({3, 3, true, true, true, true, 12}, 1);
  CHECK_THROWS_AS(BfsShortestWin(spec, 1000), StateGraphTooLarge);
}

namespace {

// Every grammar-shaped command over the game's verbs, names and directions.
std::vector<Tokens> AllCommandShapes(const GameState& s) {
  const GameSpec& spec = *s.spec;
  std::vector<Tokens> names;
  for (const Entity& e : spec.entities) names.push_back(e.name);
  for (const Room& room : spec.rooms) {
    for (const auto& [d, door] : room.doors) names.push_back(door.name);
  }
  std::vector<Tokens> out;
  for (const char* single : {"look", "inventory", "prepare meal"}) out.push_back(Tokenize(single));
  for (Direction d : kAllDirections) out.push_back({"go", std::string(DirectionName(d))});
  for (const char* verb : {"examine", "eat", "open", "close", "take", "drop"}) {
    for (const Tokens& n : names) {
      Tokens t{verb};
      AppendTokens(t, n);
      out.push_back(t);
    }
  }
  for (const char* verb : {"put", "insert", "cook", "slice", "chop", "dice"}) {
    for (const char* prep : {"in", "on", "with"}) {
      for (const Tokens& a : names) {
        for (const Tokens& b : names) {
          Tokens t{verb};
          AppendTokens(t, a);
          t.push_back(prep);
          AppendTokens(t, b);
          if (t.size() <= 5) out.push_back(t);
        }
      }
    }
  }
  return out;
}

void CheckAdmissibility(const GameState& s) {
  const std::vector<Tokens> admissible = AdmissibleActions(s);
  const std::set<Tokens> admissible_set(admissible.begin(), admissible.end());
  for (const Tokens& command : AllCommandShapes(s)) {
    const ParseResult parsed = ParseCommand(command, s);
    bool executes = false;
    if (const auto* c = std::get_if<Command>(&parsed)) {
      executes = !CheckPreconditions(*c, s).has_value() && c->verb != Verb::kInventory;
    }
    CHECK_MESSAGE(executes == (admissible_set.count(command) == 1), JoinTokens(command));
  }
}

}  // namespace

TEST_CASE("engine properties along random walks") {
  SplitMix64 rng(2024);
  std::vector<GameSpec> specs;
  for (const SkillConfig& skills : SampleSkills()) specs.push_back(GenerateCookingGame(skills, 17));
  specs.push_back(GenerateCoinGame(4, 5));
  specs.push_back(TableOneSpec());

  for (const GameSpec& raw : specs) {
    auto spec = Share(raw);
    ValidateSpec(*spec);
    const std::set<std::string> vocab = EngineVocabulary(*spec);
    for (int walk = 0; walk < 4; ++walk) {
      GameState s = InitialState(spec);
      std::vector<Tokens> actions;
      std::vector<Observation> observations{Observe(s)};
      std::vector<int> rewards;
      int previous_reward = 0;
      while (!s.done) {
        if (walk == 0 && s.step_count % 7 == 0) CheckAdmissibility(s);
        const std::vector<Tokens> admissible = AdmissibleActions(s);
        REQUIRE_FALSE(admissible.empty());
        const Tokens action = rng.Choice(admissible);
        const ParseResult parsed = ParseCommand(action, s);
        REQUIRE(std::holds_alternative<Command>(parsed));
        CHECK_FALSE(CheckPreconditions(std::get<Command>(parsed), s).has_value());

        if (action[0] == "go" && spec->family == Family::kCooking) {
          // Walking there and back returns to the same room.
          GameState probe = s;
          const RoomId before = probe.current_room;
          StepInPlace(probe, action);
          if (!probe.done) {
            const Direction d = *ParseDirection(action[1]);
            StepInPlace(probe, {"go", std::string(DirectionName(Opposite(d)))});
            CHECK(probe.current_room == before);
          }
        }

        rewards.push_back(StepInPlace(s, action));
        actions.push_back(action);
        observations.push_back(Observe(s));
        CHECK(s.cumulative_reward >= previous_reward);
        CHECK(s.cumulative_reward <= spec->max_score);
        previous_reward = s.cumulative_reward;
        for (const Tokens* channel : {&observations.back().description,
                                      &observations.back().inventory, &observations.back().quest,
                                      &observations.back().feedback}) {
          for (const std::string& t : *channel) CHECK_MESSAGE(vocab.count(t) == 1, t);
        }
      }
      CHECK((s.step_count <= kMaxEpisodeSteps));
      if (s.won) CHECK(s.cumulative_reward == spec->max_score);

      // Deterministic replay.
      GameState replay = InitialState(spec);
      CHECK(Observe(replay) == observations[0]);
      for (std::size_t i = 0; i < actions.size(); ++i) {
        CHECK(StepInPlace(replay, actions[i]) == rewards[i]);
        CHECK(Observe(replay) == observations[i + 1]);
      }
      CHECK(replay == s);
    }
  }
}

TEST_CASE("text game counts frames") {
  TextGame game(GenerateCoinGame(3, 9));
  CHECK(game.frames() == 0);
  game.Step(Tokenize("look"));
  game.Reset();
  game.Step(Tokenize("look"));
  CHECK(game.frames() == 2);
  CHECK(game.state().step_count == 1);
}

}  // namespace gotext

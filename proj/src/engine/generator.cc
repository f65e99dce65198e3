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

#include "gotext/engine/generator.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gotext/engine/rng.h"

namespace gotext {
namespace {

const std::vector<std::string>& CoinAdjectives() {
  static const std::vector<std::string> kWords = {
      "cozy",    "dusty",   "silent",  "narrow", "bright",  "shabby",  "grand",
      "chilly",  "musty",   "spotless", "cramped", "airy",   "gloomy",  "sunny",
      "steamy",  "drafty",  "vaulted", "tidy",   "cluttered", "humid", "ornate",
      "bare",    "rustic",  "modern",  "ancient", "crooked", "velvet", "marble",
      "wooden",  "painted"};
  return kWords;
}

const std::vector<std::string>& CoinNouns() {
  static const std::vector<std::string> kWords = {
      "chamber", "cubicle",  "studio",  "closet",  "attic",   "cellar",  "parlor",
      "salon",   "lounge",   "pantry",  "gallery", "library", "workshop", "office",
      "nursery", "foyer",    "hallway", "vault",   "den",     "loft",    "study",
      "boudoir", "scullery", "armory",  "chapel",  "conservatory", "solarium",
      "laundry", "garret",   "annex"};
  return kWords;
}

const std::vector<std::string>& CookingRoomNames() {
  static const std::vector<std::string> kNames = {
      "pantry",   "garden",  "backyard", "living room", "bedroom",  "bathroom",
      "corridor", "driveway", "street",  "supermarket", "shed",    "cellar"};
  return kNames;
}

const std::vector<std::string>& DoorNames() {
  static const std::vector<std::string> kNames = {
      "screen door",  "wooden door",   "sliding patio door", "front door",
      "barn door",    "glass door",    "fiberglass door",    "frosted glass door",
      "plain door",   "sliding door",  "metal door",         "oak door",
      "iron gate",    "garage door",   "storm door"};
  return kNames;
}

// At most two tokens each so every command fits in five tokens.
const std::vector<std::string>& IngredientNames() {
  static const std::vector<std::string> kNames = {
      "red apple",     "red onion",    "black pepper", "yellow potato",
      "purple potato", "red potato",   "white onion",  "yellow onion",
      "carrot",        "hot pepper",   "bell pepper",  "banana",
      "cheese",        "chicken breast", "chicken leg", "chicken wing",
      "pork chop",     "salt",         "flour",        "milk",
      "olive oil",     "parsley",      "cilantro",     "lettuce",
      "red tuna",      "white tuna",   "egg",          "sugar",
      "green apple",   "tomato",       "cucumber",     "mushroom"};
  return kNames;
}

// Picks `count` distinct items.
std::vector<std::string> Sample(const std::vector<std::string>& pool, int count,
                                SplitMix64& rng) {
  std::vector<std::string> copy = pool;
  rng.Shuffle(copy);
  copy.resize(std::min<std::size_t>(copy.size(), static_cast<std::size_t>(count)));
  return copy;
}

std::vector<Direction> FreeDirections(const Room& room) {
  std::vector<Direction> out;
  for (Direction d : kAllDirections) {
    if (room.exits.count(d) == 0) out.push_back(d);
  }
  return out;
}

void Connect(std::vector<Room>& rooms, RoomId a, Direction d, RoomId b) {
  rooms[a].exits[d] = b;
  rooms[b].exits[Opposite(d)] = a;
}

RoomId AddRoom(std::vector<Room>& rooms, Tokens name) {
  Room room;
  room.id = static_cast<RoomId>(rooms.size());
  room.name = std::move(name);
  rooms.push_back(std::move(room));
  return rooms.back().id;
}

EntityId AddEntity(GameSpec& spec, Entity entity) {
  entity.id = static_cast<EntityId>(spec.entities.size());
  spec.entities.push_back(std::move(entity));
  return spec.entities.back().id;
}

// Unique two-token (then three-token) room names for coin games.
std::vector<Tokens> CoinRoomNames(int count, SplitMix64& rng) {
  std::vector<Tokens> names;
  std::set<Tokens> used;
  const auto& adjectives = CoinAdjectives();
  const auto& nouns = CoinNouns();
  const std::size_t two_word = adjectives.size() * nouns.size();
  while (static_cast<int>(names.size()) < count) {
    Tokens name;
    if (used.size() < two_word * 3 / 4) {
      name = {rng.Choice(adjectives), rng.Choice(nouns)};
    } else {
      name = {rng.Choice(adjectives), rng.Choice(adjectives), rng.Choice(nouns)};
    }
    if (used.insert(name).second) names.push_back(std::move(name));
  }
  return names;
}

}  // namespace

GameSpec GenerateCoinGame(int level, std::uint64_t seed) {
  if (level < 1) throw SpecError("coin level must be >= 1");
  SplitMix64 rng(DeriveSeed(seed, "coin"));
  GameSpec spec;
  spec.family = Family::kCoin;
  spec.level = level;
  spec.rng_seed = seed;
  spec.game_id = "coin-l" + std::to_string(level) + "-s" + std::to_string(seed);

  const int num_rooms = 3 * level;
  std::vector<Tokens> names = CoinRoomNames(num_rooms, rng);
  int next_name = 0;

  for (int i = 0; i < level; ++i) AddRoom(spec.rooms, names[next_name++]);
  for (int i = 0; i + 1 < level; ++i) {
    const std::vector<Direction> free = FreeDirections(spec.rooms[i]);
    Connect(spec.rooms, i, rng.Choice(free), i + 1);
  }
  for (int i = 0; i < level; ++i) {
    std::vector<Direction> free = FreeDirections(spec.rooms[i]);
    rng.Shuffle(free);
    for (int k = 0; k < 2; ++k) {
      const RoomId distractor = AddRoom(spec.rooms, names[next_name++]);
      Connect(spec.rooms, i, free[k], distractor);
    }
  }

  spec.start_room = 0;
  spec.coin_room = level - 1;
  Entity coin;
  coin.name = {"coin"};
  coin.kind = EntityKind::kCoin;
  coin.portable = true;
  spec.coin = AddEntity(spec, coin);
  spec.rooms[spec.coin_room].entities.push_back(spec.coin);
  spec.max_score = static_cast<int>(ScoringEvents(spec).size());
  return spec;
}

GameSpec GenerateCookingGame(const SkillConfig& skills, std::uint64_t seed) {
  if (!skills.Valid()) throw SpecError("invalid skill config " + skills.Label());
  SplitMix64 rng(DeriveSeed(seed, "cooking:" + skills.Label()));
  GameSpec spec;
  spec.family = Family::kCooking;
  spec.skills = skills;
  spec.rng_seed = seed;
  spec.game_id = "cook-" + skills.Label() + "-s" + std::to_string(seed);

  // Map: a random spanning tree grown from the kitchen.
  spec.kitchen_room = AddRoom(spec.rooms, {"kitchen"});
  for (const std::string& name : Sample(CookingRoomNames(), skills.go - 1, rng)) {
    std::vector<std::pair<RoomId, Direction>> slots;
    for (const Room& room : spec.rooms) {
      for (Direction d : FreeDirections(room)) slots.emplace_back(room.id, d);
    }
    const auto [anchor, dir] = rng.Choice(slots);
    const RoomId id = AddRoom(spec.rooms, Tokenize(name));
    Connect(spec.rooms, anchor, dir, id);
  }
  spec.start_room = rng.BelowInt(static_cast<int>(spec.rooms.size()));

  if (skills.open && skills.go > 1) {
    std::vector<std::pair<RoomId, Direction>> edges;
    for (const Room& room : spec.rooms) {
      for (const auto& [d, next] : room.exits) {
        if (room.id < next) edges.emplace_back(room.id, d);
      }
    }
    rng.Shuffle(edges);
    const std::vector<std::string> door_names = Sample(DoorNames(), static_cast<int>(edges.size()), rng);
    for (std::size_t k = 0; k < edges.size(); ++k) {
      if (k > 0 && !rng.Bernoulli(0.5)) continue;
      const auto [a, d] = edges[k];
      const Door door{static_cast<DoorId>(k), Tokenize(door_names[k]), false};
      const RoomId b = spec.rooms[a].exits.at(d);
      spec.rooms[a].doors[d] = door;
      spec.rooms[b].doors[Opposite(d)] = door;
    }
  }

  // Kitchen furniture.
  Entity counter;
  counter.name = {"counter"};
  counter.kind = EntityKind::kContainer;
  counter.supporter = true;
  const EntityId counter_id = AddEntity(spec, counter);
  Entity fridge;
  fridge.name = {"fridge"};
  fridge.kind = EntityKind::kContainer;
  fridge.openable = true;
  fridge.is_open = !skills.open;
  const EntityId fridge_id = AddEntity(spec, fridge);
  Entity stove;
  stove.name = {"stove"};
  stove.kind = EntityKind::kTool;
  stove.role = ToolRole::kStove;
  const EntityId stove_id = AddEntity(spec, stove);
  Entity oven;
  oven.name = {"oven"};
  oven.kind = EntityKind::kTool;
  oven.role = ToolRole::kOven;
  const EntityId oven_id = AddEntity(spec, oven);
  for (EntityId id : {counter_id, fridge_id, stove_id, oven_id}) {
    spec.rooms[spec.kitchen_room].entities.push_back(id);
  }
  if (skills.cut) {
    Entity knife;
    knife.name = {"knife"};
    knife.kind = EntityKind::kTool;
    knife.role = ToolRole::kSharp;
    knife.portable = true;
    const EntityId knife_id = AddEntity(spec, knife);
    spec.entities[counter_id].contents.push_back(knife_id);
  }
  if (skills.cook) {
    Entity bbq;
    bbq.name = {"bbq"};
    bbq.kind = EntityKind::kTool;
    bbq.role = ToolRole::kBbq;
    const EntityId bbq_id = AddEntity(spec, bbq);
    const RoomId where = skills.go > 1
                             ? 1 + rng.BelowInt(static_cast<int>(spec.rooms.size()) - 1)
                             : spec.kitchen_room;
    spec.rooms[where].entities.push_back(bbq_id);
  }

  // Ingredients: recipe items first, then distractor food.
  const int num_distractors = 1 + rng.BelowInt(2);
  const int filler = skills.drop ? kDropCapacity : 0;
  std::vector<std::string> food_names =
      Sample(IngredientNames(), skills.recipe + num_distractors + filler, rng);
  std::vector<EntityId> ingredients;
  for (int i = 0; i < skills.recipe; ++i) {
    Entity item;
    item.name = Tokenize(food_names[i]);
    item.kind = EntityKind::kIngredient;
    item.portable = true;
    item.states = StateBit(ItemState::kRaw);
    ingredients.push_back(AddEntity(spec, item));
  }
  spec.recipe.ingredients = ingredients;

  auto place_outside = [&](EntityId id, bool force_fridge) {
    const int choice = force_fridge ? 0 : rng.BelowInt(3);
    if (choice == 0) {
      spec.entities[fridge_id].contents.push_back(id);
    } else if (choice == 1) {
      spec.entities[counter_id].contents.push_back(id);
    } else {
      const RoomId where = rng.BelowInt(static_cast<int>(spec.rooms.size()));
      spec.rooms[where].entities.push_back(id);
    }
  };
  for (int i = 0; i < skills.recipe; ++i) {
    if (i < skills.take) {
      place_outside(ingredients[i], skills.open && i == 0);
    } else {
      spec.inventory.push_back(ingredients[i]);
    }
  }

  int next_food = skills.recipe;
  for (int i = 0; i < num_distractors; ++i) {
    Entity item;
    item.name = Tokenize(food_names[next_food++]);
    item.kind = EntityKind::kFood;
    item.portable = true;
    item.states = StateBit(ItemState::kRaw);
    const EntityId id = AddEntity(spec, item);
    const RoomId where = rng.BelowInt(static_cast<int>(spec.rooms.size()));
    spec.rooms[where].entities.push_back(id);
  }
  // A full inventory forces drop-and-retake when capacity is limited.
  while (skills.drop && static_cast<int>(spec.inventory.size()) < kDropCapacity) {
    Entity item;
    item.name = Tokenize(food_names[next_food++]);
    item.kind = EntityKind::kFood;
    item.portable = true;
    item.states = StateBit(ItemState::kRaw);
    spec.inventory.push_back(AddEntity(spec, item));
  }

  // Directions: every ingredient is cut (cooked) with probability 0.5, at
  // least one when the skill is active.
  std::vector<bool> cut(skills.recipe, false), cooked(skills.recipe, false);
  if (skills.cut) {
    for (int i = 0; i < skills.recipe; ++i) cut[i] = rng.Bernoulli(0.5);
    if (std::find(cut.begin(), cut.end(), true) == cut.end()) {
      cut[rng.BelowInt(skills.recipe)] = true;
    }
  }
  if (skills.cook) {
    for (int i = 0; i < skills.recipe; ++i) cooked[i] = rng.Bernoulli(0.5);
    if (std::find(cooked.begin(), cooked.end(), true) == cooked.end()) {
      cooked[rng.BelowInt(skills.recipe)] = true;
    }
  }
  static constexpr Operation kCutOps[] = {Operation::kSlice, Operation::kChop, Operation::kDice};
  static constexpr Operation kCookOps[] = {Operation::kGrill, Operation::kRoast, Operation::kFry};
  for (int i = 0; i < skills.recipe; ++i) {
    if (cut[i]) spec.recipe.directions.push_back({ingredients[i], kCutOps[rng.BelowInt(3)]});
    if (cooked[i]) spec.recipe.directions.push_back({ingredients[i], kCookOps[rng.BelowInt(3)]});
  }

  Entity meal;
  meal.name = {"meal"};
  meal.kind = EntityKind::kFood;
  meal.portable = true;
  spec.meal = AddEntity(spec, meal);

  spec.max_score = static_cast<int>(ScoringEvents(spec).size());
  return spec;
}

}  // namespace gotext

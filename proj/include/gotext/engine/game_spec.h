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

#ifndef GOTEXT_ENGINE_GAME_SPEC_H_
#define GOTEXT_ENGINE_GAME_SPEC_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gotext/engine/text.h"

namespace gotext {

inline constexpr int kSpecSchemaVersion = 1;
inline constexpr int kMaxEpisodeSteps = 50;
inline constexpr int kDropCapacity = 3;

using RoomId = int;
using EntityId = int;
using DoorId = int;

enum class Family { kCoin, kCooking };

enum class Direction { kNorth = 0, kSouth = 1, kEast = 2, kWest = 3 };
inline constexpr std::array<Direction, 4> kAllDirections = {
    Direction::kNorth, Direction::kSouth, Direction::kEast, Direction::kWest};

Direction Opposite(Direction d);
std::string_view DirectionName(Direction d);
std::optional<Direction> ParseDirection(std::string_view name);

enum class EntityKind { kIngredient, kTool, kContainer, kFood, kCoin };

// What a tool does when named as the instrument of cook/slice/chop/dice.
enum class ToolRole { kNone, kSharp, kStove, kOven, kBbq };

enum class ItemState { kRaw, kGrilled, kRoasted, kFried, kSliced, kChopped, kDiced };
enum class Operation { kGrill, kRoast, kFry, kSlice, kChop, kDice };

// Bit i set <=> ItemState(i) present.
using StateSet = std::uint8_t;

inline constexpr StateSet StateBit(ItemState s) {
  return static_cast<StateSet>(1u << static_cast<unsigned>(s));
}
inline constexpr StateSet kCookStates = StateBit(ItemState::kGrilled) |
                                        StateBit(ItemState::kRoasted) |
                                        StateBit(ItemState::kFried);
inline constexpr StateSet kCutStates = StateBit(ItemState::kSliced) |
                                       StateBit(ItemState::kChopped) |
                                       StateBit(ItemState::kDiced);

std::string_view StateName(ItemState s);
std::string_view OperationName(Operation op);
std::optional<Operation> ParseOperation(std::string_view verb);
ItemState ResultState(Operation op);
bool IsCookOperation(Operation op);
// Heat source required by a cooking operation.
ToolRole CookingTool(Operation op);

struct Door {
  DoorId id = 0;
  Tokens name;
  bool is_open = false;

  bool operator==(const Door&) const = default;
};

struct Room {
  RoomId id = 0;
  Tokens name;
  std::map<Direction, RoomId> exits;
  std::map<Direction, Door> doors;
  std::vector<EntityId> entities;

  bool operator==(const Room&) const = default;
};

struct Entity {
  EntityId id = 0;
  Tokens name;
  EntityKind kind = EntityKind::kFood;
  StateSet states = 0;
  bool portable = false;
  ToolRole role = ToolRole::kNone;
  // Containers only. A supporter (counter) is always open and uses "on".
  bool openable = false;
  bool is_open = true;
  bool supporter = false;
  std::vector<EntityId> contents;

  bool operator==(const Entity&) const = default;
};

struct ProcessingStep {
  EntityId ingredient = 0;
  Operation operation = Operation::kSlice;

  bool operator==(const ProcessingStep&) const = default;
};

struct Recipe {
  std::vector<EntityId> ingredients;
  std::vector<ProcessingStep> directions;

  bool operator==(const Recipe&) const = default;
};

struct SkillConfig {
  int recipe = 1;
  int take = 0;
  bool open = false;
  bool cook = false;
  bool cut = false;
  bool drop = false;
  int go = 1;

  bool operator==(const SkillConfig&) const = default;

  bool Valid() const;
  // Difficulty label, e.g. "recipe2+take1+open+cut+go6".
  std::string Label() const;
  static SkillConfig FromLabel(std::string_view label);
};

struct GameSpec {
  int schema_version = kSpecSchemaVersion;
  std::string game_id;
  Family family = Family::kCooking;
  std::vector<Room> rooms;
  std::vector<Entity> entities;
  std::vector<EntityId> inventory;
  RoomId start_room = 0;
  // Cooking only.
  RoomId kitchen_room = -1;
  EntityId meal = -1;
  Recipe recipe;
  SkillConfig skills;
  // Coin only.
  RoomId coin_room = -1;
  EntityId coin = -1;
  int level = 0;

  int max_score = 0;
  std::uint64_t rng_seed = 0;

  bool operator==(const GameSpec&) const = default;

  // 0 means unlimited.
  int inventory_capacity() const {
    return family == Family::kCooking && skills.drop ? kDropCapacity : 0;
  }
  const Entity& entity(EntityId id) const { return entities.at(id); }
  const Room& room(RoomId id) const { return rooms.at(id); }
  bool IsRecipeIngredient(EntityId id) const;
};

class SpecError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Event identifiers worth one point each: "take:<id>", "process:<k>",
// "prepare", "eat" (cooking) and "take:<coin id>" (coin).
std::vector<std::string> ScoringEvents(const GameSpec& spec);

// Shortest number of moves between two rooms ignoring doors.
int RoomDistance(const GameSpec& spec, RoomId from, RoomId to);

// Checks every structural invariant of a spec; throws SpecError.
void ValidateSpec(const GameSpec& spec);

std::string SpecToJson(const GameSpec& spec);
GameSpec SpecFromJson(std::string_view json);

void SaveSpec(const GameSpec& spec, const std::string& path);
GameSpec LoadSpec(const std::string& path);

}  // namespace gotext

#endif  // GOTEXT_ENGINE_GAME_SPEC_H_

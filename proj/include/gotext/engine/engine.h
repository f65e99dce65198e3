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

#ifndef GOTEXT_ENGINE_ENGINE_H_
#define GOTEXT_ENGINE_ENGINE_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gotext/engine/game_spec.h"

namespace gotext {

// Where an entity currently is. `id` is a room id for kRoom and a container
// entity id for kInside.
struct Location {
  enum class Kind { kRoom, kInventory, kInside, kConsumed, kNowhere };
  Kind kind = Kind::kNowhere;
  int id = -1;

  bool operator==(const Location&) const = default;
};

struct GameState {
  std::shared_ptr<const GameSpec> spec;
  RoomId current_room = 0;
  std::vector<EntityId> inventory;
  std::vector<Location> entity_locations;
  std::vector<StateSet> entity_states;
  std::vector<bool> container_open;
  std::map<DoorId, bool> door_states;
  int cumulative_reward = 0;
  int step_count = 0;
  bool done = false;
  bool won = false;
  Tokens last_action;
  Tokens last_feedback;
  std::set<std::string> awarded_events;

  bool operator==(const GameState& other) const;

  bool Holds(EntityId id) const {
    return entity_locations[id].kind == Location::Kind::kInventory;
  }
  // Canonical encoding of everything that affects future dynamics; ignores
  // the step counter and the text of the last turn.
  std::string DynamicsKey() const;
};

struct Observation {
  Tokens description;
  Tokens inventory;
  Tokens quest;
  Tokens prev_action;
  Tokens feedback;

  bool operator==(const Observation&) const = default;
  std::uint64_t Hash() const;
};

enum class Verb {
  kGo, kLook, kExamine, kInventory, kEat, kOpen, kClose, kTake, kDrop,
  kPut, kInsert, kCook, kSlice, kChop, kDice, kPrepare
};

std::string_view VerbName(Verb verb);

// A resolved command argument: an entity or a door.
struct Target {
  enum class Kind { kNone, kEntity, kDoor };
  Kind kind = Kind::kNone;
  int id = -1;

  bool operator==(const Target&) const = default;
};

struct Command {
  Verb verb = Verb::kLook;
  std::optional<Direction> direction;
  Target object;
  Target instrument;
  // "in", "on" or "with" for two-argument verbs.
  std::string preposition;

  bool operator==(const Command&) const = default;
};

struct ParseError {
  enum class Kind { kUnknownVerb, kUnknownEntity, kMalformedPattern };
  Kind kind = Kind::kMalformedPattern;
  // Offending token span [begin, end).
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const ParseError&) const = default;
  std::string Message(const Tokens& tokens) const;
};

using ParseResult = std::variant<Command, ParseError>;

// Grammar:
//   go <dir> | look | inventory | examine|eat|open|close|take|drop <entity>
//   put|insert <entity> in|on <container> | cook|slice|chop|dice <X> with <Y>
//   prepare meal
// Coin games accept only go, take and look. Entity names match in full
// against entities visible in the current room or held, and doors of the
// current room for open/close/examine.
ParseResult ParseCommand(const Tokens& tokens, const GameState& state);

// Surface form of a command, e.g. {"cook", "red", "apple", "with", "oven"}.
Tokens RenderCommand(const Command& command, const GameState& state);

// Why the command cannot be executed in `state`, or nullopt if it can.
std::optional<std::string> CheckPreconditions(const Command& command, const GameState& state);

class SteppingFinishedGame : public std::logic_error {
 public:
  SteppingFinishedGame() : std::logic_error("step() called on a finished game") {}
};

GameState InitialState(std::shared_ptr<const GameSpec> spec);
Observation Observe(const GameState& state);

std::pair<GameState, Observation> Reset(std::shared_ptr<const GameSpec> spec);

struct StepResult {
  GameState state;
  Observation observation;
  int reward = 0;
  bool done = false;
};

StepResult Step(const GameState& state, const Tokens& action);

// Applies `action` in place and returns the reward.
int StepInPlace(GameState& state, const Tokens& action);

// Commands that parse and whose preconditions hold, sorted
// lexicographically by surface string; "inventory" is never included and a
// finished game has none.
std::vector<Tokens> AdmissibleActions(const GameState& state);

// Every token the engine can emit or parse for this spec.
std::set<std::string> EngineVocabulary(const GameSpec& spec);

// Engine instance with a running frame counter (one frame per step).
class TextGame {
 public:
  explicit TextGame(std::shared_ptr<const GameSpec> spec);
  explicit TextGame(GameSpec spec);

  const Observation& Reset();

  struct Outcome {
    int reward = 0;
    bool done = false;
  };
  Outcome Step(const Tokens& action);

  std::vector<Tokens> AdmissibleActions() const;

  const GameState& state() const { return state_; }
  const Observation& observation() const { return observation_; }
  const GameSpec& spec() const { return *spec_; }
  const std::shared_ptr<const GameSpec>& spec_ptr() const { return spec_; }
  std::int64_t frames() const { return frames_; }

 private:
  std::shared_ptr<const GameSpec> spec_;
  GameState state_;
  Observation observation_;
  std::int64_t frames_ = 0;
};

}  // namespace gotext

#endif  // GOTEXT_ENGINE_ENGINE_H_

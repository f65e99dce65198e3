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

#include "gotext/engine/engine.h"

#include <algorithm>
#include <sstream>

#include "gotext/engine/rng.h"

namespace gotext {
namespace {

using LK = Location::Kind;

constexpr std::string_view kQuestIntro =
    "gather all following ingredients and follow the directions to prepare this tasty meal.";
constexpr std::string_view kCoinQuest = "your objective is to find the coin and take it.";

// Every literal word used by the templates below.
constexpr std::string_view kTemplateText =
    "you are in the there is a here on floor closed open and contains empty "
    "leading an exit to see carrying nothing ingredients directions prepare "
    "meal your objective find coin take it can't go that way have first "
    "arrive take drop put insert from into with eat delicious won lost "
    "ruined not bad already cooked cut need be holding that's edible can't "
    "too many things yet isn't ready adding inventory recipe which was "
    "nothing special about it's doesn't understand only understood as far "
    "wanting verb recognise see such thing of ingredient cook slice chop "
    "dice grill roast fry look examine close open prepare meal north south "
    "east west grilled roasted fried sliced chopped diced raw game over "
    "instrument sharp heat source what do want you're i";

const std::vector<Verb>& AllVerbs() {
  static const std::vector<Verb> kVerbs = {
      Verb::kGo,   Verb::kLook, Verb::kExamine, Verb::kInventory, Verb::kEat,
      Verb::kOpen, Verb::kClose, Verb::kTake,   Verb::kDrop,      Verb::kPut,
      Verb::kInsert, Verb::kCook, Verb::kSlice, Verb::kChop,      Verb::kDice,
      Verb::kPrepare};
  return kVerbs;
}

std::optional<Verb> ParseVerb(std::string_view token, Family family) {
  for (Verb v : AllVerbs()) {
    if (VerbName(v) != token) continue;
    if (family == Family::kCoin && v != Verb::kGo && v != Verb::kTake && v != Verb::kLook) {
      return std::nullopt;
    }
    return v;
  }
  return std::nullopt;
}

std::optional<Operation> VerbOperation(Verb v) {
  switch (v) {
    case Verb::kSlice: return Operation::kSlice;
    case Verb::kChop: return Operation::kChop;
    case Verb::kDice: return Operation::kDice;
    default: return std::nullopt;
  }
}

bool IsEdible(const Entity& e) {
  return e.kind == EntityKind::kIngredient || e.kind == EntityKind::kFood;
}

// Visible entities: room floor, inside open (or supporting) containers in the
// room, and held items.
bool IsVisible(const GameState& s, EntityId id) {
  const Location& loc = s.entity_locations[id];
  switch (loc.kind) {
    case LK::kInventory: return true;
    case LK::kRoom: return loc.id == s.current_room;
    case LK::kInside: {
      const Entity& container = s.spec->entity(loc.id);
      const bool open = container.supporter || s.container_open[loc.id];
      return open && IsVisible(s, loc.id);
    }
    default: return false;
  }
}

std::string ItemPhrase(const GameState& s, EntityId id) {
  std::string out;
  const StateSet states = s.entity_states[id];
  for (ItemState st : {ItemState::kSliced, ItemState::kChopped, ItemState::kDiced,
                       ItemState::kGrilled, ItemState::kRoasted, ItemState::kFried}) {
    if (states & StateBit(st)) {
      out += StateName(st);
      out += ' ';
    }
  }
  out += JoinTokens(s.spec->entity(id).name);
  return out;
}

std::string WithArticle(const std::string& phrase) {
  const bool vowel = !phrase.empty() && std::string_view("aeiou").find(phrase[0]) != std::string_view::npos;
  return (vowel ? "an " : "a ") + phrase;
}

std::string ListItems(const GameState& s, const std::vector<EntityId>& ids) {
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out += (i + 1 == ids.size()) ? " and " : ", ";
    out += WithArticle(ItemPhrase(s, ids[i]));
  }
  return out;
}

std::vector<EntityId> EntitiesAt(const GameState& s, LK kind, int id) {
  std::vector<EntityId> out;
  for (std::size_t e = 0; e < s.entity_locations.size(); ++e) {
    if (s.entity_locations[e].kind == kind && s.entity_locations[e].id == id) {
      out.push_back(static_cast<EntityId>(e));
    }
  }
  return out;
}

std::string DescribeRoom(const GameState& s) {
  const GameSpec& spec = *s.spec;
  const Room& room = spec.room(s.current_room);
  const std::string name = JoinTokens(room.name);
  std::ostringstream out;
  out << "-= " << name << " =- you are in the " << name << ". ";
  for (EntityId id : EntitiesAt(s, LK::kRoom, room.id)) {
    const Entity& e = spec.entity(id);
    const std::string ename = JoinTokens(e.name);
    if (e.kind == EntityKind::kContainer) {
      out << "there is " << WithArticle(ename) << " here. ";
      const std::vector<EntityId> inside = EntitiesAt(s, LK::kInside, id);
      if (e.supporter) {
        if (inside.empty()) {
          out << "the " << ename << " is empty. ";
        } else {
          out << "on the " << ename << " you see " << ListItems(s, inside) << ". ";
        }
      } else if (!s.container_open[id]) {
        out << "the " << ename << " is closed. ";
      } else if (inside.empty()) {
        out << "the " << ename << " is open and empty. ";
      } else {
        out << "the " << ename << " is open and contains " << ListItems(s, inside) << ". ";
      }
    } else if (!e.portable) {
      out << "there is " << WithArticle(ename) << " here. ";
    } else {
      out << "there is " << WithArticle(ItemPhrase(s, id)) << " on the floor. ";
    }
  }
  for (const auto& [dir, next] : room.exits) {
    auto door = room.doors.find(dir);
    if (door != room.doors.end()) {
      const bool open = s.door_states.at(door->second.id);
      out << "there is " << (open ? "an open " : "a closed ") << JoinTokens(door->second.name)
          << " leading " << DirectionName(dir) << ". ";
    } else {
      out << "there is an exit to the " << DirectionName(dir) << ". ";
    }
  }
  return out.str();
}

std::string DescribeInventory(const GameState& s) {
  if (s.inventory.empty()) return "you are carrying nothing.";
  return "you are carrying: " + ListItems(s, s.inventory) + ".";
}

std::string DescribeQuest(const GameSpec& spec) {
  if (spec.family == Family::kCoin) return std::string(kCoinQuest);
  std::ostringstream out;
  out << kQuestIntro << " ingredients: ";
  for (std::size_t i = 0; i < spec.recipe.ingredients.size(); ++i) {
    if (i) out << ", ";
    out << JoinTokens(spec.entity(spec.recipe.ingredients[i]).name);
  }
  out << ". directions: ";
  for (const ProcessingStep& step : spec.recipe.directions) {
    out << OperationName(step.operation) << " the "
        << JoinTokens(spec.entity(step.ingredient).name) << ", ";
  }
  out << "prepare meal.";
  return out.str();
}

// Full-token match against visible entities, then (optionally) doors here.
Target Resolve(const GameState& s, const Tokens& tokens, std::size_t begin, std::size_t end,
               bool allow_doors) {
  const Tokens name(tokens.begin() + static_cast<std::ptrdiff_t>(begin),
                    tokens.begin() + static_cast<std::ptrdiff_t>(end));
  for (const Entity& e : s.spec->entities) {
    if (e.name == name && IsVisible(s, e.id)) return {Target::Kind::kEntity, e.id};
  }
  if (allow_doors) {
    for (const auto& [dir, door] : s.spec->room(s.current_room).doors) {
      if (door.name == name) return {Target::Kind::kDoor, door.id};
    }
  }
  return {};
}

const Tokens& TargetName(const GameState& s, const Target& t) {
  if (t.kind == Target::Kind::kDoor) {
    for (const Room& room : s.spec->rooms) {
      for (const auto& [dir, door] : room.doors) {
        if (door.id == t.id) return door.name;
      }
    }
  }
  return s.spec->entity(t.id).name;
}

bool Award(GameState& s, const std::string& event, int* reward) {
  const std::vector<std::string> events = ScoringEvents(*s.spec);
  if (std::find(events.begin(), events.end(), event) == events.end()) return false;
  if (!s.awarded_events.insert(event).second) return false;
  ++*reward;
  return true;
}

void MoveTo(GameState& s, EntityId id, Location loc) {
  auto& inv = s.inventory;
  if (s.entity_locations[id].kind == LK::kInventory) {
    inv.erase(std::remove(inv.begin(), inv.end(), id), inv.end());
  }
  s.entity_locations[id] = loc;
  if (loc.kind == LK::kInventory) inv.push_back(id);
}

int CarriedCount(const GameState& s) { return static_cast<int>(s.inventory.size()); }

bool RecipeReady(const GameState& s) {
  const GameSpec& spec = *s.spec;
  for (EntityId id : spec.recipe.ingredients) {
    if (!s.Holds(id)) return false;
  }
  for (std::size_t k = 0; k < spec.recipe.directions.size(); ++k) {
    if (s.awarded_events.count("process:" + std::to_string(k)) == 0) return false;
  }
  return true;
}

// Applies a command whose preconditions hold. Returns feedback text.
std::string Apply(GameState& s, const Command& c, int* reward) {
  const GameSpec& spec = *s.spec;
  auto ename = [&](const Target& t) { return JoinTokens(TargetName(s, t)); };
  switch (c.verb) {
    case Verb::kGo: {
      s.current_room = spec.room(s.current_room).exits.at(*c.direction);
      return "you go " + std::string(DirectionName(*c.direction)) + " and arrive in the " +
             JoinTokens(spec.room(s.current_room).name) + ".";
    }
    case Verb::kLook:
      return DescribeRoom(s);
    case Verb::kInventory:
      return DescribeInventory(s);
    case Verb::kExamine: {
      if (c.object.kind == Target::Kind::kDoor) {
        return "the " + ename(c.object) + " is " +
               (s.door_states.at(c.object.id) ? "open." : "closed.");
      }
      const Entity& e = spec.entity(c.object.id);
      if (e.kind == EntityKind::kContainer && !e.supporter) {
        return "the " + ename(c.object) + " is " + (s.container_open[e.id] ? "open." : "closed.");
      }
      return "you see nothing special about the " + ItemPhrase(s, e.id) + ".";
    }
    case Verb::kEat: {
      const EntityId id = c.object.id;
      MoveTo(s, id, {LK::kConsumed, -1});
      if (id == spec.meal) {
        Award(s, "eat", reward);
        s.done = true;
        s.won = true;
        return "you eat the meal. delicious! you won.";
      }
      if (spec.IsRecipeIngredient(id)) {
        s.done = true;
        return "you eat the " + ename(c.object) + ". you ruined the recipe. you lost.";
      }
      return "you eat the " + ename(c.object) + ". not bad.";
    }
    case Verb::kOpen:
    case Verb::kClose: {
      const bool open = c.verb == Verb::kOpen;
      if (c.object.kind == Target::Kind::kDoor) {
        s.door_states[c.object.id] = open;
      } else {
        s.container_open[c.object.id] = open;
      }
      return std::string(open ? "you open the " : "you close the ") + ename(c.object) + ".";
    }
    case Verb::kTake: {
      const EntityId id = c.object.id;
      MoveTo(s, id, {LK::kInventory, -1});
      Award(s, "take:" + std::to_string(id), reward);
      if (spec.family == Family::kCoin && id == spec.coin) {
        s.done = true;
        s.won = true;
        return "you take the coin. you won.";
      }
      return "you take the " + ItemPhrase(s, id) + ".";
    }
    case Verb::kDrop:
      MoveTo(s, c.object.id, {LK::kRoom, s.current_room});
      return "you drop the " + ItemPhrase(s, c.object.id) + " on the floor.";
    case Verb::kPut:
    case Verb::kInsert:
      MoveTo(s, c.object.id, {LK::kInside, c.instrument.id});
      return "you put the " + ItemPhrase(s, c.object.id) + " " + c.preposition + " the " +
             ename(c.instrument) + ".";
    case Verb::kCook:
    case Verb::kSlice:
    case Verb::kChop:
    case Verb::kDice: {
      const EntityId id = c.object.id;
      Operation op;
      if (c.verb == Verb::kCook) {
        switch (spec.entity(c.instrument.id).role) {
          case ToolRole::kBbq: op = Operation::kGrill; break;
          case ToolRole::kOven: op = Operation::kRoast; break;
          default: op = Operation::kFry; break;
        }
      } else {
        op = *VerbOperation(c.verb);
      }
      s.entity_states[id] |= StateBit(ResultState(op));
      if (IsCookOperation(op)) s.entity_states[id] &= static_cast<StateSet>(~StateBit(ItemState::kRaw));
      const std::string done_text = "you " + std::string(OperationName(op)) + " the " + ename(c.object);
      if (!spec.IsRecipeIngredient(id)) return done_text + ".";
      for (std::size_t k = 0; k < spec.recipe.directions.size(); ++k) {
        const ProcessingStep& step = spec.recipe.directions[k];
        if (step.ingredient == id && step.operation == op) {
          Award(s, "process:" + std::to_string(k), reward);
          return done_text + ".";
        }
      }
      s.done = true;
      return done_text + ". that was not in the recipe. you lost.";
    }
    case Verb::kPrepare: {
      for (EntityId id : spec.recipe.ingredients) MoveTo(s, id, {LK::kConsumed, -1});
      MoveTo(s, spec.meal, {LK::kInventory, -1});
      Award(s, "prepare", reward);
      return "adding the meal to your inventory.";
    }
  }
  return "";
}

}  // namespace

std::string_view VerbName(Verb verb) {
  switch (verb) {
    case Verb::kGo: return "go";
    case Verb::kLook: return "look";
    case Verb::kExamine: return "examine";
    case Verb::kInventory: return "inventory";
    case Verb::kEat: return "eat";
    case Verb::kOpen: return "open";
    case Verb::kClose: return "close";
    case Verb::kTake: return "take";
    case Verb::kDrop: return "drop";
    case Verb::kPut: return "put";
    case Verb::kInsert: return "insert";
    case Verb::kCook: return "cook";
    case Verb::kSlice: return "slice";
    case Verb::kChop: return "chop";
    case Verb::kDice: return "dice";
    case Verb::kPrepare: return "prepare";
  }
  return "";
}

bool GameState::operator==(const GameState& o) const {
  return *spec == *o.spec && current_room == o.current_room && inventory == o.inventory &&
         entity_locations == o.entity_locations && entity_states == o.entity_states &&
         container_open == o.container_open && door_states == o.door_states &&
         cumulative_reward == o.cumulative_reward && step_count == o.step_count &&
         done == o.done && won == o.won && last_action == o.last_action &&
         last_feedback == o.last_feedback && awarded_events == o.awarded_events;
}

std::string GameState::DynamicsKey() const {
  std::string key;
  key.reserve(16 + entity_locations.size() * 6);
  key += std::to_string(current_room);
  key += done ? 'D' : 'a';
  key += won ? 'W' : 'n';
  for (std::size_t e = 0; e < entity_locations.size(); ++e) {
    key += '|';
    key += static_cast<char>('0' + static_cast<int>(entity_locations[e].kind));
    key += std::to_string(entity_locations[e].id);
    key += ':';
    key += std::to_string(entity_states[e]);
    key += container_open[e] ? 'o' : 'c';
  }
  for (const auto& [id, open] : door_states) key += open ? 'O' : 'C';
  for (const std::string& ev : awarded_events) {
    key += '#';
    key += ev;
  }
  return key;
}

std::uint64_t Observation::Hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Tokens* channel : {&description, &inventory, &quest, &prev_action, &feedback}) {
    for (const std::string& t : *channel) {
      h = Fnv1a64(t, h);
      h = Fnv1a64(" ", h);
    }
    h = Fnv1a64("|", h);
  }
  return h;
}

std::string ParseError::Message(const Tokens& tokens) const {
  switch (kind) {
    case Kind::kUnknownVerb:
      return "that's not a verb i recognise.";
    case Kind::kUnknownEntity:
      return "you can't see any such thing.";
    case Kind::kMalformedPattern:
      if (tokens.empty()) return "what do you want to do?";
      return "i only understood you as far as wanting to " + tokens[0] + ".";
  }
  return "";
}

ParseResult ParseCommand(const Tokens& tokens, const GameState& state) {
  const std::size_t n = tokens.size();
  if (n == 0) return ParseError{ParseError::Kind::kMalformedPattern, 0, 0};
  const auto verb = ParseVerb(tokens[0], state.spec->family);
  if (!verb) return ParseError{ParseError::Kind::kUnknownVerb, 0, 1};
  auto malformed = [&](std::size_t b, std::size_t e) {
    return ParseError{ParseError::Kind::kMalformedPattern, b, e};
  };
  Command cmd;
  cmd.verb = *verb;
  switch (*verb) {
    case Verb::kGo: {
      if (n != 2) return malformed(n < 2 ? 0 : 2, n < 2 ? 1 : n);
      cmd.direction = ParseDirection(tokens[1]);
      if (!cmd.direction) return malformed(1, 2);
      return cmd;
    }
    case Verb::kLook:
    case Verb::kInventory:
      if (n != 1) return malformed(1, n);
      return cmd;
    case Verb::kPrepare:
      if (n != 2 || tokens[1] != "meal") return malformed(1, n);
      return cmd;
    case Verb::kExamine:
    case Verb::kEat:
    case Verb::kOpen:
    case Verb::kClose:
    case Verb::kTake:
    case Verb::kDrop: {
      if (n < 2) return malformed(0, 1);
      const bool doors = *verb == Verb::kOpen || *verb == Verb::kClose || *verb == Verb::kExamine;
      cmd.object = Resolve(state, tokens, 1, n, doors);
      if (cmd.object.kind == Target::Kind::kNone) {
        return ParseError{ParseError::Kind::kUnknownEntity, 1, n};
      }
      return cmd;
    }
    case Verb::kPut:
    case Verb::kInsert:
    case Verb::kCook:
    case Verb::kSlice:
    case Verb::kChop:
    case Verb::kDice: {
      const bool placing = *verb == Verb::kPut || *verb == Verb::kInsert;
      std::size_t prep = n;
      for (std::size_t i = 1; i < n; ++i) {
        const std::string& t = tokens[i];
        if (placing ? (t == "in" || t == "on") : t == "with") {
          prep = i;
          break;
        }
      }
      if (prep == n || prep == 1 || prep + 1 == n) return malformed(1, n);
      cmd.preposition = tokens[prep];
      cmd.object = Resolve(state, tokens, 1, prep, false);
      if (cmd.object.kind == Target::Kind::kNone) {
        return ParseError{ParseError::Kind::kUnknownEntity, 1, prep};
      }
      cmd.instrument = Resolve(state, tokens, prep + 1, n, false);
      if (cmd.instrument.kind == Target::Kind::kNone) {
        return ParseError{ParseError::Kind::kUnknownEntity, prep + 1, n};
      }
      return cmd;
    }
  }
  return malformed(0, n);
}

Tokens RenderCommand(const Command& c, const GameState& state) {
  Tokens out{std::string(VerbName(c.verb))};
  if (c.direction) out.emplace_back(DirectionName(*c.direction));
  if (c.verb == Verb::kPrepare) out.emplace_back("meal");
  if (c.object.kind != Target::Kind::kNone) AppendTokens(out, TargetName(state, c.object));
  if (c.instrument.kind != Target::Kind::kNone) {
    out.push_back(c.preposition);
    AppendTokens(out, TargetName(state, c.instrument));
  }
  return out;
}

std::optional<std::string> CheckPreconditions(const Command& c, const GameState& s) {
  const GameSpec& spec = *s.spec;
  const Room& room = spec.room(s.current_room);
  auto entity = [&](const Target& t) -> const Entity& { return spec.entity(t.id); };
  switch (c.verb) {
    case Verb::kGo: {
      if (room.exits.count(*c.direction) == 0) return "you can't go that way.";
      auto door = room.doors.find(*c.direction);
      if (door != room.doors.end() && !s.door_states.at(door->second.id)) {
        return "you have to open the " + JoinTokens(door->second.name) + " first.";
      }
      return std::nullopt;
    }
    case Verb::kLook:
    case Verb::kInventory:
    case Verb::kExamine:
      return std::nullopt;
    case Verb::kEat:
      if (c.object.kind != Target::Kind::kEntity || !IsEdible(entity(c.object))) {
        return "that's not edible.";
      }
      if (!s.Holds(c.object.id)) return "you need to be holding that first.";
      return std::nullopt;
    case Verb::kOpen:
    case Verb::kClose: {
      const bool want_open = c.verb == Verb::kOpen;
      bool is_open;
      if (c.object.kind == Target::Kind::kDoor) {
        is_open = s.door_states.at(c.object.id);
      } else {
        const Entity& e = entity(c.object);
        if (!e.openable) return "you can't do that.";
        is_open = s.container_open[e.id];
      }
      if (is_open == want_open) return want_open ? "that's already open." : "that's already closed.";
      return std::nullopt;
    }
    case Verb::kTake: {
      const Entity& e = entity(c.object);
      if (s.Holds(e.id)) return "you already have that.";
      if (!e.portable) return "you can't take that.";
      const int capacity = spec.inventory_capacity();
      if (capacity > 0 && CarriedCount(s) >= capacity) {
        return "you're carrying too many things already.";
      }
      return std::nullopt;
    }
    case Verb::kDrop:
      if (!s.Holds(c.object.id)) return "you need to be holding that first.";
      return std::nullopt;
    case Verb::kPut:
    case Verb::kInsert: {
      if (!s.Holds(c.object.id)) return "you need to be holding that first.";
      const Entity& target = entity(c.instrument);
      if (target.kind != EntityKind::kContainer) return "you can't do that.";
      if (c.verb == Verb::kPut && !(target.supporter && c.preposition == "on")) {
        return "you can't do that.";
      }
      if (c.verb == Verb::kInsert && !(target.openable && c.preposition == "in")) {
        return "you can't do that.";
      }
      if (target.openable && !s.container_open[target.id]) return "that's closed.";
      return std::nullopt;
    }
    case Verb::kCook: {
      const Entity& item = entity(c.object);
      const Entity& tool = entity(c.instrument);
      if (!IsEdible(item)) return "you can't cook that.";
      if (!s.Holds(item.id)) return "you need to be holding that first.";
      if (tool.role != ToolRole::kStove && tool.role != ToolRole::kOven &&
          tool.role != ToolRole::kBbq) {
        return "that's not a heat source.";
      }
      if (s.entity_states[item.id] & kCookStates) return "that's already cooked.";
      return std::nullopt;
    }
    case Verb::kSlice:
    case Verb::kChop:
    case Verb::kDice: {
      const Entity& item = entity(c.object);
      const Entity& tool = entity(c.instrument);
      if (!IsEdible(item)) return "you can't cut that.";
      if (!s.Holds(item.id)) return "you need to be holding that first.";
      if (tool.role != ToolRole::kSharp) return "that's not a sharp instrument.";
      if (!s.Holds(tool.id)) return "you need to be holding the " + JoinTokens(tool.name) + " first.";
      if (s.entity_states[item.id] & kCutStates) return "that's already cut.";
      return std::nullopt;
    }
    case Verb::kPrepare:
      if (spec.family != Family::kCooking || s.current_room != spec.kitchen_room) {
        return "you can't prepare the meal here.";
      }
      if (s.entity_locations[spec.meal].kind != LK::kNowhere || !RecipeReady(s)) {
        return "the recipe isn't ready yet.";
      }
      return std::nullopt;
  }
  return "you can't do that.";
}

GameState InitialState(std::shared_ptr<const GameSpec> spec) {
  GameState s;
  const std::size_t n = spec->entities.size();
  s.current_room = spec->start_room;
  s.entity_locations.assign(n, Location{});
  s.entity_states.assign(n, 0);
  s.container_open.assign(n, false);
  for (const Entity& e : spec->entities) {
    s.entity_states[e.id] = e.states;
    s.container_open[e.id] = e.is_open;
    for (EntityId c : e.contents) s.entity_locations[c] = {LK::kInside, e.id};
  }
  for (const Room& room : spec->rooms) {
    for (EntityId e : room.entities) s.entity_locations[e] = {LK::kRoom, room.id};
    for (const auto& [dir, door] : room.doors) s.door_states[door.id] = door.is_open;
  }
  for (EntityId e : spec->inventory) {
    s.entity_locations[e] = {LK::kInventory, -1};
    s.inventory.push_back(e);
  }
  s.spec = std::move(spec);
  return s;
}

Observation Observe(const GameState& s) {
  Observation o;
  o.description = Tokenize(DescribeRoom(s));
  o.inventory = Tokenize(DescribeInventory(s));
  o.quest = Tokenize(DescribeQuest(*s.spec));
  o.prev_action = s.last_action;
  o.feedback = s.last_feedback;
  return o;
}

std::pair<GameState, Observation> Reset(std::shared_ptr<const GameSpec> spec) {
  GameState s = InitialState(std::move(spec));
  Observation o = Observe(s);
  return {std::move(s), std::move(o)};
}

int StepInPlace(GameState& s, const Tokens& action) {
  if (s.done) throw SteppingFinishedGame();
  int reward = 0;
  std::string feedback;
  const ParseResult parsed = ParseCommand(action, s);
  if (const auto* error = std::get_if<ParseError>(&parsed)) {
    feedback = error->Message(action);
  } else {
    const Command& cmd = std::get<Command>(parsed);
    if (auto failure = CheckPreconditions(cmd, s)) {
      feedback = *failure;
    } else {
      feedback = Apply(s, cmd, &reward);
    }
  }
  ++s.step_count;
  s.cumulative_reward += reward;
  s.last_action = action;
  s.last_feedback = Tokenize(feedback);
  if (s.step_count >= kMaxEpisodeSteps) s.done = true;
  return reward;
}

StepResult Step(const GameState& state, const Tokens& action) {
  if (state.done) throw SteppingFinishedGame();
  StepResult r{state, {}, 0, false};
  r.reward = StepInPlace(r.state, action);
  r.done = r.state.done;
  r.observation = Observe(r.state);
  return r;
}

std::vector<Tokens> AdmissibleActions(const GameState& s) {
  if (s.done) return {};
  const GameSpec& spec = *s.spec;
  std::vector<Command> candidates;
  candidates.push_back({Verb::kLook, {}, {}, {}, ""});
  for (const auto& [dir, next] : spec.room(s.current_room).exits) {
    candidates.push_back({Verb::kGo, dir, {}, {}, ""});
  }
  std::vector<EntityId> visible;
  for (const Entity& e : spec.entities) {
    if (IsVisible(s, e.id)) visible.push_back(e.id);
  }
  auto ent = [](EntityId id) { return Target{Target::Kind::kEntity, id}; };
  if (spec.family == Family::kCoin) {
    for (EntityId id : visible) candidates.push_back({Verb::kTake, {}, ent(id), {}, ""});
  } else {
    for (const auto& [dir, door] : spec.room(s.current_room).doors) {
      const Target t{Target::Kind::kDoor, door.id};
      for (Verb v : {Verb::kExamine, Verb::kOpen, Verb::kClose}) candidates.push_back({v, {}, t, {}, ""});
    }
    for (EntityId id : visible) {
      for (Verb v : {Verb::kExamine, Verb::kEat, Verb::kOpen, Verb::kClose, Verb::kTake, Verb::kDrop}) {
        candidates.push_back({v, {}, ent(id), {}, ""});
      }
      if (!s.Holds(id)) continue;
      for (EntityId other : visible) {
        const Entity& o = spec.entity(other);
        if (o.kind == EntityKind::kContainer) {
          candidates.push_back({o.supporter ? Verb::kPut : Verb::kInsert, {}, ent(id), ent(other),
                                o.supporter ? "on" : "in"});
        }
        if (o.role == ToolRole::kStove || o.role == ToolRole::kOven || o.role == ToolRole::kBbq) {
          candidates.push_back({Verb::kCook, {}, ent(id), ent(other), "with"});
        }
        if (o.role == ToolRole::kSharp) {
          for (Verb v : {Verb::kSlice, Verb::kChop, Verb::kDice}) {
            candidates.push_back({v, {}, ent(id), ent(other), "with"});
          }
        }
      }
    }
    candidates.push_back({Verb::kPrepare, {}, {}, {}, ""});
  }
  std::vector<std::pair<std::string, Tokens>> out;
  for (const Command& c : candidates) {
    if (CheckPreconditions(c, s)) continue;
    Tokens tokens = RenderCommand(c, s);
    out.emplace_back(JoinTokens(tokens), std::move(tokens));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  std::vector<Tokens> result;
  result.reserve(out.size());
  for (auto& [key, tokens] : out) result.push_back(std::move(tokens));
  return result;
}

std::set<std::string> EngineVocabulary(const GameSpec& spec) {
  std::set<std::string> vocab;
  for (const std::string_view text : {kTemplateText, kQuestIntro, kCoinQuest}) {
    for (std::string& t : Tokenize(text)) vocab.insert(std::move(t));
  }
  for (Verb v : AllVerbs()) vocab.emplace(VerbName(v));
  for (const Room& room : spec.rooms) {
    vocab.insert(room.name.begin(), room.name.end());
    for (const auto& [dir, door] : room.doors) vocab.insert(door.name.begin(), door.name.end());
  }
  for (const Entity& e : spec.entities) vocab.insert(e.name.begin(), e.name.end());
  return vocab;
}

TextGame::TextGame(std::shared_ptr<const GameSpec> spec) : spec_(std::move(spec)) { Reset(); }

TextGame::TextGame(GameSpec spec) : TextGame(std::make_shared<const GameSpec>(std::move(spec))) {}

const Observation& TextGame::Reset() {
  state_ = InitialState(spec_);
  observation_ = Observe(state_);
  return observation_;
}

TextGame::Outcome TextGame::Step(const Tokens& action) {
  const int reward = StepInPlace(state_, action);
  ++frames_;
  observation_ = Observe(state_);
  return {reward, state_.done};
}

std::vector<Tokens> TextGame::AdmissibleActions() const { return gotext::AdmissibleActions(state_); }

}  // namespace gotext

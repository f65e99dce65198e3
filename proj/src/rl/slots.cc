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

#include "gotext/rl/slots.h"

#include <algorithm>

#include "gotext/engine/engine.h"

namespace gotext::rl {
namespace {

const std::vector<std::string_view>& CookingVerbs() {
  static const std::vector<std::string_view> kVerbs = {
      "go",   "look", "examine", "inventory", "eat",  "open", "close", "take",
      "drop", "put",  "insert",  "cook",      "slice", "chop", "dice",  "prepare"};
  return kVerbs;
}

void AddName(const Tokens& name, std::array<std::set<std::string>, kNumSlots>& words) {
  if (name.empty()) return;
  words[kNoun1].insert(name.back());
  words[kNoun2].insert(name.back());
  for (std::size_t i = 0; i + 1 < name.size(); ++i) {
    words[kAdj1].insert(name[i]);
    words[kAdj2].insert(name[i]);
  }
}

// Splits an object phrase into (adjective, noun); "<s>" marks absence.
bool SplitPhrase(const Tokens& tokens, std::size_t begin, std::size_t end, std::string& adj,
                 std::string& noun) {
  const std::size_t n = end - begin;
  if (n == 0) {
    adj = noun = std::string(nn::kNoneToken);
    return true;
  }
  if (n > 2) return false;
  noun = tokens[end - 1];
  adj = n == 2 ? tokens[begin] : std::string(nn::kNoneToken);
  return true;
}

}  // namespace

std::string_view Preposition(std::string_view verb) {
  if (verb == "put") return "on";
  if (verb == "insert") return "in";
  return "with";
}

SlotVocab::SlotVocab() {
  for (auto& w : words_) w = {std::string(nn::kNoneToken)};
}

SlotVocab SlotVocab::FromWords(const std::array<std::set<std::string>, kNumSlots>& words) {
  SlotVocab v;
  for (int s = 0; s < kNumSlots; ++s) {
    for (const std::string& w : words[s]) {
      if (w != nn::kNoneToken) v.words_[s].push_back(w);
    }
  }
  return v;
}

SlotVocab SlotVocab::FromSpecs(const std::vector<const GameSpec*>& specs) {
  std::array<std::set<std::string>, kNumSlots> words;
  for (const GameSpec* spec : specs) {
    if (spec->family == Family::kCoin) {
      for (const char* v : {"go", "take", "look"}) words[kVerb].insert(v);
    } else {
      for (std::string_view v : CookingVerbs()) words[kVerb].emplace(v);
    }
    for (Direction d : kAllDirections) {
      words[kNoun1].emplace(DirectionName(d));
    }
    for (const Entity& e : spec->entities) AddName(e.name, words);
    for (const Room& room : spec->rooms) {
      for (const auto& [dir, door] : room.doors) AddName(door.name, words);
    }
  }
  return FromWords(words);
}

int SlotVocab::Index(int slot, std::string_view word) const {
  const auto& w = words_[slot];
  const auto it = std::find(w.begin(), w.end(), word);
  return it == w.end() ? -1 : static_cast<int>(it - w.begin());
}

std::optional<SlotAction> SlotVocab::ToSlots(const Tokens& action) const {
  if (action.empty()) return std::nullopt;
  std::array<std::string, kNumSlots> words;
  words[kVerb] = action[0];
  const std::string_view prep = Preposition(action[0]);
  std::size_t split = action.size();
  for (std::size_t i = 1; i < action.size(); ++i) {
    if (action[i] == prep) {
      split = i;
      break;
    }
  }
  if (!SplitPhrase(action, 1, split, words[kAdj1], words[kNoun1])) return std::nullopt;
  if (split < action.size()) {
    if (split + 1 == action.size() || split == 1) return std::nullopt;
    if (!SplitPhrase(action, split + 1, action.size(), words[kAdj2], words[kNoun2])) return std::nullopt;
  } else {
    words[kAdj2] = words[kNoun2] = std::string(nn::kNoneToken);
  }
  SlotAction out;
  for (int s = 0; s < kNumSlots; ++s) {
    out[s] = Index(s, words[s]);
    if (out[s] < 0) return std::nullopt;
  }
  return out;
}

Tokens SlotVocab::FromSlots(const SlotAction& slots) const {
  Tokens out;
  const auto add = [&](int s) {
    if (slots[s] > 0) out.push_back(words_[s].at(static_cast<std::size_t>(slots[s])));
  };
  add(kVerb);
  add(kAdj1);
  add(kNoun1);
  if (slots[kNoun2] > 0 || slots[kAdj2] > 0) {
    out.emplace_back(Preposition(slots[kVerb] > 0 ? words_[kVerb][static_cast<std::size_t>(slots[kVerb])] : ""));
    add(kAdj2);
    add(kNoun2);
  }
  return out;
}

nlohmann::json SlotVocab::ToJson() const {
  nlohmann::json j;
  for (int s = 0; s < kNumSlots; ++s) j[std::string(kSlotNames[s])] = words_[s];
  return j;
}

SlotVocab SlotVocab::FromJson(const nlohmann::json& j) {
  std::array<std::set<std::string>, kNumSlots> words;
  for (int s = 0; s < kNumSlots; ++s) {
    for (const std::string& w : j.at(std::string(kSlotNames[s]))) words[s].insert(w);
  }
  return FromWords(words);
}

}  // namespace gotext::rl

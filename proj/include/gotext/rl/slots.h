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

#ifndef GOTEXT_RL_SLOTS_H_
#define GOTEXT_RL_SLOTS_H_

#include <array>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "gotext/engine/game_spec.h"
#include "gotext/engine/text.h"
#include "gotext/nn/vocab.h"

namespace gotext::rl {

// Word positions of the fixed action template.
enum Slot { kVerb = 0, kAdj1 = 1, kNoun1 = 2, kAdj2 = 3, kNoun2 = 4 };
inline constexpr int kNumSlots = 5;
inline constexpr std::array<std::string_view, kNumSlots> kSlotNames = {"verb", "adj1", "noun1",
                                                                        "adj2", "noun2"};

// Per-slot word indices; index 0 of every slot is <s>.
using SlotAction = std::array<int, kNumSlots>;

// Connective placed between the two object phrases for a verb.
std::string_view Preposition(std::string_view verb);

class SlotVocab {
 public:
  SlotVocab();

  // Verbs of the game grammar, adjectives = leading words of two-word names,
  // nouns = head words of entity and door names plus directions.
  static SlotVocab FromSpecs(const std::vector<const GameSpec*>& specs);
  static SlotVocab FromWords(const std::array<std::set<std::string>, kNumSlots>& words);

  const std::vector<std::string>& words(int slot) const { return words_[slot]; }
  int size(int slot) const { return static_cast<int>(words_[slot].size()); }
  int Index(int slot, std::string_view word) const;  // -1 if absent

  // Action tokens to slot indices; nullopt when the action does not fit the
  // template or uses an unknown word.
  std::optional<SlotAction> ToSlots(const Tokens& action) const;
  // Concatenates the slot words, dropping <s> and inserting the verb's
  // preposition before a second object.
  Tokens FromSlots(const SlotAction& slots) const;

  nlohmann::json ToJson() const;
  static SlotVocab FromJson(const nlohmann::json& j);

 private:
  std::array<std::vector<std::string>, kNumSlots> words_;
};

}  // namespace gotext::rl

#endif  // GOTEXT_RL_SLOTS_H_

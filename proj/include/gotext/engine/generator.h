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

#ifndef GOTEXT_ENGINE_GENERATOR_H_
#define GOTEXT_ENGINE_GENERATOR_H_

#include <cstdint>

#include "gotext/engine/game_spec.h"

namespace gotext {

// Hard-mode coin game. The path from the start room to the coin room spans
// `level` rooms (level - 1 moves), so the shortest win is `level` commands
// including "take coin". Each path room has two dead-end distractor rooms.
GameSpec GenerateCoinGame(int level, std::uint64_t seed);

// Cooking game with `skills.go` rooms. Throws SpecError on invalid skills.
GameSpec GenerateCookingGame(const SkillConfig& skills, std::uint64_t seed);

}  // namespace gotext

#endif  // GOTEXT_ENGINE_GENERATOR_H_

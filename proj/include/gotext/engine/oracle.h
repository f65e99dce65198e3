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

#ifndef GOTEXT_ENGINE_ORACLE_H_
#define GOTEXT_ENGINE_ORACLE_H_

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gotext/engine/engine.h"

namespace gotext {

class StateGraphTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultOracleNodeLimit = 1'000'000;

int MaxScore(const GameSpec& spec);

// Minimum number of commands that wins the game, found by breadth-first
// search over the reachable state graph with admissible actions as edges.
// Returns -1 if no win exists within the episode step cap. Throws
// StateGraphTooLarge once more than `node_limit` states are discovered.
int BfsShortestWin(const GameSpec& spec, std::size_t node_limit = kDefaultOracleNodeLimit);

// Same search, returning one optimal winning command sequence (empty if none).
std::vector<Tokens> BfsWinningActions(const GameSpec& spec,
                                      std::size_t node_limit = kDefaultOracleNodeLimit);

}  // namespace gotext

#endif  // GOTEXT_ENGINE_ORACLE_H_

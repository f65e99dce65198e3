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

#include "gotext/engine/oracle.h"

#include <algorithm>
#include <deque>
#include <memory>
#include <unordered_map>

namespace gotext {

int MaxScore(const GameSpec& spec) { return spec.max_score; }

std::vector<Tokens> BfsWinningActions(const GameSpec& spec, std::size_t node_limit) {
  auto shared = std::make_shared<const GameSpec>(spec);
  struct Node {
    GameState state;
    int parent;
    Tokens action;
    int depth;
  };
  std::vector<Node> nodes;
  std::unordered_map<std::string, int> seen;
  nodes.push_back({InitialState(shared), -1, {}, 0});
  seen.emplace(nodes[0].state.DynamicsKey(), 0);
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int index = queue.front();
    queue.pop_front();
    if (nodes[index].depth >= kMaxEpisodeSteps) continue;
    const GameState current = nodes[index].state;
    for (Tokens& action : AdmissibleActions(current)) {
      GameState next = current;
      StepInPlace(next, action);
      if (next.won) {
        std::vector<Tokens> path{action};
        for (int i = index; nodes[i].parent >= 0; i = nodes[i].parent) path.push_back(nodes[i].action);
        std::reverse(path.begin(), path.end());
        return path;
      }
      if (next.done) continue;
      next.last_action.clear();
      next.last_feedback.clear();
      auto [it, inserted] = seen.emplace(next.DynamicsKey(), static_cast<int>(nodes.size()));
      if (!inserted) continue;
      if (nodes.size() >= node_limit) {
        throw StateGraphTooLarge("state graph exceeds " + std::to_string(node_limit) + " nodes");
      }
      const int depth = nodes[index].depth + 1;
      nodes.push_back({std::move(next), index, std::move(action), depth});
      queue.push_back(static_cast<int>(nodes.size()) - 1);
    }
  }
  return {};
}

int BfsShortestWin(const GameSpec& spec, std::size_t node_limit) {
  const std::vector<Tokens> path = BfsWinningActions(spec, node_limit);
  return path.empty() ? -1 : static_cast<int>(path.size());
}

}  // namespace gotext

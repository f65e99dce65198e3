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

#ifndef GOTEXT_EXPLORE_PHASE1_H_
#define GOTEXT_EXPLORE_PHASE1_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "gotext/engine/engine.h"
#include "gotext/explore/archive.h"
#include "gotext/explore/trajectory.h"
#include "json.hpp"

namespace gotext {

inline constexpr double kDefaultBinWidth = 5.0;
inline constexpr int kDefaultExploreSteps = 30;
inline constexpr int kDefaultPatience = 500;
inline constexpr int kDefaultCellEmbeddingDim = 50;

struct ExploreResult {
  std::vector<std::pair<CellKey, CellMeta>> discovered;
  std::int64_t frames = 0;
};

// Restores `from` by replaying its actions on `game`, then takes up to
// `k_steps` uniformly random admissible actions, emitting a candidate cell
// after each one. Never consumes more than `frame_limit` frames; a route
// longer than the limit is not replayed at all. Throws ReplayDivergence when
// the replay disagrees with the recorded hashes or rewards.
ExploreResult ExploreFrom(TextGame& game, const CellMeta& from, int k_steps, SplitMix64& rng,
                          const WordVectors& embeddings, double bin_width,
                          std::int64_t frame_limit, bool key_inventory = false);

// Tokens a cell key is computed from: the description, optionally followed by
// the inventory.
Tokens CellTokens(const Observation& obs, bool key_inventory);

struct Phase1Config {
  double bin_width = kDefaultBinWidth;
  int k_steps = kDefaultExploreSteps;
  // Iterations without improvement of a max-score route before stopping.
  int patience = kDefaultPatience;
  // Cell embeddings; when null, seeded rows over the game vocabulary are used.
  const WordVectors* embeddings = nullptr;
  int embedding_dim = kDefaultCellEmbeddingDim;
  std::uint64_t embedding_seed = 0;
  // Exponent on (1 + reward) in the selection weight.
  double reward_power = 1.0;
  // Also key cells on the inventory channel.
  bool key_inventory = false;
};

struct ProgressPoint {
  std::int64_t frames = 0;
  int reward = 0;
  int length = 0;
};

struct ArchiveStats {
  std::int64_t frames_used = 0;
  std::int64_t engine_frames = 0;
  std::size_t cells = 0;
  // Distinct winning cells discovered.
  int wins = 0;
  int iterations = 0;
  int best_reward = 0;
  int best_length = 0;
  // Frames consumed when the first winning route was found, or -1.
  std::int64_t frames_to_first_win = -1;
  std::vector<ProgressPoint> progress;
};

nlohmann::json ArchiveStatsToJson(const ArchiveStats& stats);

struct Phase1Result {
  Trajectory best;
  ArchiveStats stats;
};

// Seeded embedding table for cell keys over the game's vocabulary.
WordVectors DefaultCellEmbeddings(const GameSpec& spec, int dim, std::uint64_t seed);

Phase1Result RunPhase1(std::shared_ptr<const GameSpec> spec, std::int64_t frame_budget,
                       const Phase1Config& config, std::uint64_t seed);

struct RolloutResult {
  std::int64_t frames_used = 0;
  std::int64_t frames_to_first_win = -1;
  int episodes = 0;
  int best_reward = 0;
  int win_length = 0;
  std::vector<ProgressPoint> progress;
  bool won() const { return frames_to_first_win >= 0; }
};

// Uniform random admissible rollouts from reset until the first win or the
// budget runs out.
RolloutResult RandomRollouts(std::shared_ptr<const GameSpec> spec, std::int64_t frame_budget,
                             std::uint64_t seed);

}  // namespace gotext

#endif  // GOTEXT_EXPLORE_PHASE1_H_

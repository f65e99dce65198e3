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

#include "gotext/explore/phase1.h"

namespace gotext {

ExploreResult ExploreFrom(TextGame& game, const CellMeta& from, int k_steps, SplitMix64& rng,
                          const WordVectors& embeddings, double bin_width,
                          std::int64_t frame_limit, bool key_inventory) {
  ExploreResult result;
  const auto length = static_cast<std::int64_t>(from.length());
  if (from.terminal || length + 1 > frame_limit || k_steps <= 0) return result;

  const Observation* obs = &game.Reset();
  const bool check_hashes = !from.observation_hashes.empty();
  if (check_hashes && obs->Hash() != from.observation_hashes[0]) {
    throw ReplayDivergence("reset observation differs from the archived route");
  }
  for (std::size_t i = 0; i < from.actions.size(); ++i) {
    if (game.state().done) throw ReplayDivergence("game ended during replay");
    const TextGame::Outcome outcome = game.Step(from.actions[i]);
    ++result.frames;
    obs = &game.observation();
    if (outcome.reward != from.rewards[i] ||
        (check_hashes && obs->Hash() != from.observation_hashes[i + 1])) {
      throw ReplayDivergence("replay diverges at step " + std::to_string(i));
    }
  }
  if (game.state().done) return result;

  const std::int64_t steps = std::min<std::int64_t>(k_steps, frame_limit - length);
  CellMeta meta = from;
  meta.visits = 0;
  for (std::int64_t s = 0; s < steps && !game.state().done; ++s) {
    const std::vector<Tokens> admissible = game.AdmissibleActions();
    const Tokens& action = rng.Choice(admissible);
    const TextGame::Outcome outcome = game.Step(action);
    ++result.frames;
    obs = &game.observation();
    meta.actions.push_back(action);
    meta.rewards.push_back(outcome.reward);
    meta.observation_hashes.push_back(obs->Hash());
    meta.cumulative_reward += outcome.reward;
    meta.terminal = outcome.done;
    meta.won = game.state().won;
    result.discovered.emplace_back(
        ComputeCellKey(CellTokens(*obs, key_inventory), meta.cumulative_reward, embeddings,
                       bin_width), meta);
  }
  return result;
}

Tokens CellTokens(const Observation& obs, bool key_inventory) {
  if (!key_inventory) return obs.description;
  Tokens tokens = obs.description;
  AppendTokens(tokens, obs.inventory);
  return tokens;
}

nlohmann::json ArchiveStatsToJson(const ArchiveStats& stats) {
  nlohmann::json progress = nlohmann::json::array();
  for (const ProgressPoint& p : stats.progress) {
    progress.push_back({{"frames", p.frames}, {"reward", p.reward}, {"length", p.length}});
  }
  return {{"frames_used", stats.frames_used},
          {"cells", stats.cells},
          {"wins", stats.wins},
          {"iterations", stats.iterations},
          {"best_reward", stats.best_reward},
          {"best_length", stats.best_length},
          {"frames_to_first_win", stats.frames_to_first_win},
          {"progress", progress}};
}

WordVectors DefaultCellEmbeddings(const GameSpec& spec, int dim, std::uint64_t seed) {
  return WordVectors::Seeded(EngineVocabulary(spec), dim, seed);
}

Phase1Result RunPhase1(std::shared_ptr<const GameSpec> spec, std::int64_t frame_budget,
                       const Phase1Config& config, std::uint64_t seed) {
  WordVectors own_embeddings;
  if (config.embeddings == nullptr) {
    own_embeddings = DefaultCellEmbeddings(*spec, config.embedding_dim, config.embedding_seed);
  }
  const WordVectors& embeddings = config.embeddings ? *config.embeddings : own_embeddings;

  TextGame game(spec);
  SplitMix64 rng(DeriveSeed(seed, "phase1:" + spec->game_id));
  Archive archive(config.reward_power);
  {
    const Observation& obs = game.Reset();
    CellMeta root;
    root.observation_hashes = {obs.Hash()};
    archive.Update(ComputeCellKey(CellTokens(obs, config.key_inventory), 0, embeddings, config.bin_width),
                   std::move(root));
  }

  ArchiveStats stats;
  int since_improvement = 0;
  while (archive.frames_used() < frame_budget) {
    const CellKey* key = nullptr;
    try {
      key = &archive.Select(rng);
    } catch (const EmptyArchive&) {
      break;
    }
    const CellMeta from = *archive.Find(*key);
    const std::int64_t before = archive.frames_used();
    ExploreResult explored = ExploreFrom(game, from, config.k_steps, rng, embeddings,
                                         config.bin_width, frame_budget - before, config.key_inventory);
    if (explored.frames == 0) break;
    archive.AddFrames(explored.frames);
    ++stats.iterations;

    bool improved = false;
    for (std::size_t j = 0; j < explored.discovered.size(); ++j) {
      auto& [cell, meta] = explored.discovered[j];
      const bool won = meta.won;
      const CellMeta* previous_best = archive.best();
      const int prev_reward = previous_best ? previous_best->cumulative_reward : 0;
      const std::size_t prev_length = previous_best ? previous_best->length() : 0;
      const Archive::UpdateResult r = archive.Update(cell, std::move(meta));
      if (won && r == Archive::UpdateResult::kInserted) ++stats.wins;
      const CellMeta* best = archive.best();
      if (best->cumulative_reward != prev_reward || best->length() != prev_length) {
        improved = true;
        const std::int64_t at =
            before + static_cast<std::int64_t>(from.length()) + static_cast<std::int64_t>(j) + 1;
        stats.progress.push_back(
            {at, best->cumulative_reward, static_cast<int>(best->length())});
        if (best->won && stats.frames_to_first_win < 0) stats.frames_to_first_win = at;
      }
    }

    if (archive.best()->won) {
      since_improvement = improved ? 0 : since_improvement + 1;
      if (since_improvement >= config.patience) break;
    }
  }

  stats.frames_used = archive.frames_used();
  stats.engine_frames = game.frames();
  stats.cells = archive.size();
  Phase1Result result;
  const CellMeta* best = archive.best();
  stats.best_reward = best->cumulative_reward;
  stats.best_length = static_cast<int>(best->length());
  result.best = ReplayActions(spec, best->actions);
  result.stats = std::move(stats);
  return result;
}

RolloutResult RandomRollouts(std::shared_ptr<const GameSpec> spec, std::int64_t frame_budget,
                             std::uint64_t seed) {
  TextGame game(spec);
  SplitMix64 rng(DeriveSeed(seed, "random:" + spec->game_id));
  RolloutResult result;
  while (game.frames() < frame_budget) {
    game.Reset();
    ++result.episodes;
    while (!game.state().done && game.frames() < frame_budget) {
      const std::vector<Tokens> admissible = game.AdmissibleActions();
      game.Step(rng.Choice(admissible));
      if (game.state().cumulative_reward > result.best_reward) {
        result.best_reward = game.state().cumulative_reward;
        result.progress.push_back({game.frames(), result.best_reward, game.state().step_count});
      }
      if (game.state().won) {
        result.frames_to_first_win = game.frames();
        result.win_length = game.state().step_count;
        result.frames_used = game.frames();
        return result;
      }
    }
  }
  result.frames_used = game.frames();
  return result;
}

}  // namespace gotext

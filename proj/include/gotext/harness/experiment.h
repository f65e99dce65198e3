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

#ifndef GOTEXT_HARNESS_EXPERIMENT_H_
#define GOTEXT_HARNESS_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gotext/explore/phase1.h"
#include "gotext/harness/corpus.h"
#include "gotext/policy/seq2seq.h"
#include "gotext/rl/dqn.h"
#include "json.hpp"

namespace gotext::harness {

// Runs fn(0..n-1) on `workers` threads. Each index runs exactly once; callers
// write results into per-index slots so the outcome is independent of
// scheduling.
void ParallelFor(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

enum class Setting { kSingle, kJoint, kZeroShot };
std::string_view SettingName(Setting setting);
std::optional<Setting> ParseSetting(std::string_view name);

enum class ModelKind { kSeq2Seq, kLstmDqn, kLstmDqnAdm, kDrrn, kRandom };
std::string_view ModelName(ModelKind kind);
std::optional<ModelKind> ParseModelKind(std::string_view name);

struct GameResult {
  std::string game_id;
  std::string label;
  int score = 0;
  int max_score = 0;
  int steps = 0;
  bool win = false;
  std::vector<Tokens> actions;
  // Single-setting Seq2Seq only: final epoch loss, and whether greedy
  // decoding reproduces every training action.
  double train_loss = -1;
  bool memorised = false;
};

struct MetricsTable {
  std::string setting;
  std::string model;
  std::vector<GameResult> rows;

  int total_score() const;
  int total_max_score() const;
  int total_steps() const;
  int wins() const;
  // total_score / total_max_score, 0 for an empty table.
  double normalized_score() const;
};

// Plays `actions` from reset and scores the episode.
GameResult ScoreActions(const std::shared_ptr<const GameSpec>& spec, const std::string& label,
                        const std::vector<Tokens>& actions);

// Replays every winning row and throws ReplayDivergence unless it reaches
// max_score.
void VerifyWins(const MetricsTable& table, const Corpus& corpus);

class MissingTrajectory : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Phase-1 output for a corpus: best trajectory per game id.
using TrajectorySet = std::map<std::string, Trajectory>;

struct ExploreOptions {
  std::int64_t frame_budget = 200000;
  Phase1Config phase1;
  std::uint64_t seed = 1;
  int workers = 1;
};

struct ExploreOutcome {
  TrajectorySet trajectories;
  std::map<std::string, ArchiveStats> stats;
};

ExploreOutcome ExploreCorpus(const Corpus& corpus, const ExploreOptions& options);

// Phase-1 routes scored like a model.
MetricsTable Phase1Table(const Corpus& corpus, const TrajectorySet& trajectories);

// Writes <game_id>.jsonl per game; reads back every game of the corpus that
// has a file.
void SaveTrajectories(const Corpus& corpus, const TrajectorySet& trajectories,
                      const std::filesystem::path& dir, std::uint64_t seed);
TrajectorySet LoadTrajectories(const Corpus& corpus, const std::filesystem::path& dir);

struct SettingConfig {
  policy::PolicyConfig policy;
  // Per-game training in the single setting.
  policy::TrainConfig single_train;
  // One model over many games in the joint and zero-shot settings.
  policy::TrainConfig shared_train;
  rl::RlConfig rl;
  rl::DqnConfig dqn;
  bool prune_cycles = true;
  std::size_t vocab_min_size = 0;
  int max_steps = kMaxEpisodeSteps;
  int workers = 1;
  std::uint64_t seed = 1;
  const WordVectors* embeddings = nullptr;
};

// Small models and budgets that fit a single CPU core.
SettingConfig DeskSettingConfig();
nlohmann::json SettingConfigToJson(const SettingConfig& config);

// single: one model per game, evaluated on that game, over the whole corpus.
// joint: one model over every game, evaluated on every game; examples are
// reshuffled each epoch. zero_shot: trained on split.train (model selection
// on split.validation) and evaluated on split.test. Rows follow manifest
// order. Seq2Seq needs a trajectory for every training game.
MetricsTable RunSetting(Setting setting, ModelKind kind, const Corpus& corpus,
                        const TrajectorySet& trajectories, const CorpusSplit* split,
                        const SettingConfig& config);

// Columns: setting,model,game_id,label,score,max_score,steps,win.
void WriteMetricsCsv(const std::filesystem::path& path, const std::vector<MetricsTable>& tables);
std::vector<MetricsTable> ReadMetricsCsv(const std::filesystem::path& path);
// Normalized score per label, rows sorted by increasing difficulty.
void WriteBreakdownCsv(const std::filesystem::path& path, const std::vector<MetricsTable>& tables);
// One JSON line per evaluated episode with its actions.
void WriteEpisodesJsonl(const std::filesystem::path& path, const std::vector<MetricsTable>& tables);

struct ExplorationConfig {
  std::vector<int> levels = {5, 10, 15};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  std::int64_t frame_budget = 100000;
  Phase1Config phase1;
  int workers = 1;
};

struct ExplorationRun {
  std::string method;  // "go-explore" or "random-rollout"
  int level = 0;
  std::uint64_t seed = 0;
  int optimum = 0;
  bool won = false;
  // -1 when censored at the budget.
  std::int64_t frames_to_first_win = -1;
  int win_length = 0;
  std::int64_t frames_used = 0;
  std::vector<ProgressPoint> progress;
};

// Both methods on coin games for every (level, seed); the game seed doubles
// as the run seed.
std::vector<ExplorationRun> ExplorationComparison(const ExplorationConfig& config);
nlohmann::json ExplorationConfigToJson(const ExplorationConfig& config);

// Columns: method,level,seed,frames,reward,length.
void WriteExplorationCurves(const std::filesystem::path& path,
                            const std::vector<ExplorationRun>& runs);
// Columns: method,level,seed,optimum,won,frames_to_first_win,win_length,frames_used.
void WriteExplorationSummary(const std::filesystem::path& path,
                             const std::vector<ExplorationRun>& runs);

nlohmann::json Phase1ConfigToJson(const Phase1Config& config);

}  // namespace gotext::harness

#endif  // GOTEXT_HARNESS_EXPERIMENT_H_

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

#ifndef GOTEXT_EXPLORE_TRAJECTORY_H_
#define GOTEXT_EXPLORE_TRAJECTORY_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gotext/engine/engine.h"

namespace gotext {

// One decision: the observation seen, the action taken and its reward.
struct TrajectoryStep {
  Observation observation;
  Tokens action;
  int reward = 0;

  bool operator==(const TrajectoryStep&) const = default;
};

struct Trajectory {
  std::string game_id;
  std::vector<TrajectoryStep> steps;

  bool operator==(const Trajectory&) const = default;
  std::size_t size() const { return steps.size(); }
  bool empty() const { return steps.empty(); }
  int CumulativeReward() const;
  std::vector<Tokens> Actions() const;
};

class ReplayDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class TrajectoryFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Plays `actions` from reset and records every step. Stops early if the game
// ends; throws ReplayDivergence if actions remain after the end.
Trajectory ReplayActions(std::shared_ptr<const GameSpec> spec, const std::vector<Tokens>& actions);

// Replays the trajectory's actions and checks every observation and reward.
void VerifyTrajectory(std::shared_ptr<const GameSpec> spec, const Trajectory& trajectory);

// Removes every segment that returns the game to a state it was already in
// (same dynamics, ignoring the step counter and the last turn's text), then
// replays the remaining actions. The reward is unchanged.
Trajectory PruneStateCycles(std::shared_ptr<const GameSpec> spec, const Trajectory& trajectory);

struct TrajectoryFile {
  Trajectory trajectory;
  int max_score = 0;
  std::uint64_t seed = 0;
};

// JSON lines: a header {game_id, max_score, seed, reward, length}, then one
// {obs:{d,i,q,p,f}, action, reward} line per step.
void WriteTrajectoryJsonl(std::ostream& out, const TrajectoryFile& file);
TrajectoryFile ReadTrajectoryJsonl(std::istream& in);
void SaveTrajectory(const std::filesystem::path& path, const TrajectoryFile& file);
TrajectoryFile LoadTrajectory(const std::filesystem::path& path);

}  // namespace gotext

#endif  // GOTEXT_EXPLORE_TRAJECTORY_H_

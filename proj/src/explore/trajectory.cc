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

#include "gotext/explore/trajectory.h"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "json.hpp"

namespace gotext {

using nlohmann::json;

int Trajectory::CumulativeReward() const {
  int total = 0;
  for (const TrajectoryStep& step : steps) total += step.reward;
  return total;
}

std::vector<Tokens> Trajectory::Actions() const {
  std::vector<Tokens> actions;
  actions.reserve(steps.size());
  for (const TrajectoryStep& step : steps) actions.push_back(step.action);
  return actions;
}

Trajectory ReplayActions(std::shared_ptr<const GameSpec> spec, const std::vector<Tokens>& actions) {
  TextGame game(spec);
  Trajectory trajectory;
  trajectory.game_id = spec->game_id;
  Observation obs = game.Reset();
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (game.state().done) {
      throw ReplayDivergence("game ended after " + std::to_string(i) + " of " +
                             std::to_string(actions.size()) + " actions");
    }
    const TextGame::Outcome outcome = game.Step(actions[i]);
    trajectory.steps.push_back({std::move(obs), actions[i], outcome.reward});
    obs = game.observation();
  }
  return trajectory;
}

void VerifyTrajectory(std::shared_ptr<const GameSpec> spec, const Trajectory& trajectory) {
  const Trajectory replayed = ReplayActions(spec, trajectory.Actions());
  for (std::size_t i = 0; i < trajectory.steps.size(); ++i) {
    if (!(replayed.steps[i] == trajectory.steps[i])) {
      throw ReplayDivergence("trajectory for " + spec->game_id + " diverges at step " +
                             std::to_string(i));
    }
  }
}

Trajectory PruneStateCycles(std::shared_ptr<const GameSpec> spec, const Trajectory& trajectory) {
  TextGame game(spec);
  game.Reset();
  std::vector<Tokens> kept;
  std::unordered_map<std::string, std::size_t> seen{{game.state().DynamicsKey(), 0}};
  std::vector<std::string> keys{game.state().DynamicsKey()};
  for (const TrajectoryStep& step : trajectory.steps) {
    if (game.state().done) throw ReplayDivergence("trajectory continues past the end of the game");
    game.Step(step.action);
    kept.push_back(step.action);
    std::string key = game.state().DynamicsKey();
    const auto it = seen.find(key);
    if (it != seen.end()) {
      for (std::size_t i = it->second + 1; i < keys.size(); ++i) seen.erase(keys[i]);
      keys.resize(it->second + 1);
      kept.resize(it->second);
    } else {
      seen.emplace(key, keys.size());
      keys.push_back(std::move(key));
    }
  }
  Trajectory out = ReplayActions(spec, kept);
  out.game_id = trajectory.game_id;
  if (out.CumulativeReward() != trajectory.CumulativeReward()) {
    throw ReplayDivergence("pruned trajectory changed the reward");
  }
  return out;
}

namespace {

json ObservationToJson(const Observation& obs) {
  return json{{"d", obs.description},
              {"i", obs.inventory},
              {"q", obs.quest},
              {"p", obs.prev_action},
              {"f", obs.feedback}};
}

Observation ObservationFromJson(const json& j) {
  Observation obs;
  j.at("d").get_to(obs.description);
  j.at("i").get_to(obs.inventory);
  j.at("q").get_to(obs.quest);
  j.at("p").get_to(obs.prev_action);
  j.at("f").get_to(obs.feedback);
  return obs;
}

}  // namespace

void WriteTrajectoryJsonl(std::ostream& out, const TrajectoryFile& file) {
  const Trajectory& t = file.trajectory;
  const json header{{"game_id", t.game_id},
                    {"max_score", file.max_score},
                    {"seed", file.seed},
                    {"reward", t.CumulativeReward()},
                    {"length", t.size()}};
  out << header.dump() << '\n';
  for (const TrajectoryStep& step : t.steps) {
    const json line{
        {"obs", ObservationToJson(step.observation)}, {"action", step.action}, {"reward", step.reward}};
    out << line.dump() << '\n';
  }
}

TrajectoryFile ReadTrajectoryJsonl(std::istream& in) {
  TrajectoryFile file;
  std::string line;
  int line_number = 0;
  try {
    if (!std::getline(in, line)) throw TrajectoryFormatError("missing trajectory header");
    ++line_number;
    const json header = json::parse(line);
    header.at("game_id").get_to(file.trajectory.game_id);
    header.at("max_score").get_to(file.max_score);
    header.at("seed").get_to(file.seed);
    while (std::getline(in, line)) {
      ++line_number;
      if (line.empty()) continue;
      const json j = json::parse(line);
      TrajectoryStep step;
      step.observation = ObservationFromJson(j.at("obs"));
      j.at("action").get_to(step.action);
      j.at("reward").get_to(step.reward);
      file.trajectory.steps.push_back(std::move(step));
    }
  } catch (const json::exception& e) {
    throw TrajectoryFormatError("line " + std::to_string(line_number) + ": " + e.what());
  }
  return file;
}

void SaveTrajectory(const std::filesystem::path& path, const TrajectoryFile& file) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TrajectoryFormatError("cannot write " + path.string());
  WriteTrajectoryJsonl(out, file);
}

TrajectoryFile LoadTrajectory(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TrajectoryFormatError("cannot read " + path.string());
  return ReadTrajectoryJsonl(in);
}

}  // namespace gotext

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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gotext/engine/generator.h"
#include "gotext/engine/oracle.h"
#include "gotext/harness/experiment.h"
#include "gotext/nn/gradcheck.h"

namespace py = pybind11;
using namespace gotext;
using namespace gotext::harness;

namespace {

using SpecPtr = std::shared_ptr<GameSpec>;

py::dict ObservationDict(const Observation& o) {
  py::dict d;
  d["description"] = JoinTokens(o.description);
  d["inventory"] = JoinTokens(o.inventory);
  d["quest"] = JoinTokens(o.quest);
  d["prev_action"] = JoinTokens(o.prev_action);
  d["feedback"] = JoinTokens(o.feedback);
  return d;
}

std::vector<std::string> Joined(const std::vector<Tokens>& actions) {
  std::vector<std::string> out;
  for (const Tokens& a : actions) out.push_back(JoinTokens(a));
  return out;
}

std::vector<Tokens> Split(const std::vector<std::string>& actions) {
  std::vector<Tokens> out;
  for (const std::string& a : actions) out.push_back(Tokenize(a));
  return out;
}

SkillConfig Skills(const py::object& skills) {
  if (py::isinstance<py::str>(skills)) return SkillConfig::FromLabel(skills.cast<std::string>());
  const py::dict d = skills.cast<py::dict>();
  SkillConfig s;
  auto get = [&](const char* key, auto fallback) {
    return d.contains(key) ? d[key].cast<decltype(fallback)>() : fallback;
  };
  s.recipe = get("recipe", s.recipe);
  s.take = get("take", s.take);
  s.open = get("open", s.open);
  s.cook = get("cook", s.cook);
  s.cut = get("cut", s.cut);
  s.drop = get("drop", s.drop);
  s.go = get("go", s.go);
  return s;
}

Phase1Config MakePhase1(int patience, double bin_width, int k_steps) {
  Phase1Config c;
  c.patience = patience;
  c.bin_width = bin_width;
  c.k_steps = k_steps;
  return c;
}

py::list Rows(const MetricsTable& t) {
  py::list rows;
  for (const GameResult& r : t.rows) {
    py::dict d;
    d["game_id"] = r.game_id;
    d["label"] = r.label;
    d["score"] = r.score;
    d["max_score"] = r.max_score;
    d["steps"] = r.steps;
    d["win"] = r.win;
    d["actions"] = Joined(r.actions);
    rows.append(d);
  }
  return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Text-game engine, Go-Explore phase 1 and policy training";

  py::class_<GameSpec, SpecPtr>(m, "GameSpec")
      .def_property_readonly("game_id", [](const GameSpec& s) { return s.game_id; })
      .def_property_readonly("family",
                             [](const GameSpec& s) { return s.family == Family::kCoin ? "coin" : "cooking"; })
      .def_property_readonly("max_score", [](const GameSpec& s) { return s.max_score; })
      .def_property_readonly("label", [](const GameSpec& s) {
        return s.family == Family::kCoin ? "level" + std::to_string(s.level) : s.skills.Label();
      })
      .def("to_json", [](const GameSpec& s) { return SpecToJson(s); })
      .def_static("from_json", [](const std::string& j) {
        GameSpec s = SpecFromJson(j);
        ValidateSpec(s);
        return std::make_shared<GameSpec>(std::move(s));
      });

  m.def("generate_coin_game",
        [](int level, std::uint64_t seed) { return std::make_shared<GameSpec>(GenerateCoinGame(level, seed)); },
        py::arg("level"), py::arg("seed"));
  m.def("generate_cooking_game",
        [](const py::object& skills, std::uint64_t seed) {
          return std::make_shared<GameSpec>(GenerateCookingGame(Skills(skills), seed));
        },
        py::arg("skills"), py::arg("seed"));
  m.def("bfs_shortest_win", [](const SpecPtr& s) { return BfsShortestWin(*s); });
  m.def("bfs_winning_actions", [](const SpecPtr& s) { return Joined(BfsWinningActions(*s)); });

  py::class_<TextGame>(m, "TextGame")
      .def(py::init([](const SpecPtr& spec) { return TextGame(std::shared_ptr<const GameSpec>(spec)); }))
      .def("reset", [](TextGame& g) { return ObservationDict(g.Reset()); })
      .def("step",
           [](TextGame& g, const std::string& action) {
             const auto o = g.Step(Tokenize(action));
             return py::make_tuple(o.reward, o.done);
           })
      .def("admissible_actions", [](const TextGame& g) { return Joined(g.AdmissibleActions()); })
      .def_property_readonly("observation", [](const TextGame& g) { return ObservationDict(g.observation()); })
      .def_property_readonly("score", [](const TextGame& g) { return g.state().cumulative_reward; })
      .def_property_readonly("done", [](const TextGame& g) { return g.state().done; })
      .def_property_readonly("won", [](const TextGame& g) { return g.state().won; })
      .def_property_readonly("frames", &TextGame::frames);

  m.def(
      "run_phase1",
      [](const SpecPtr& spec, std::int64_t frame_budget, std::uint64_t seed, int patience,
         double bin_width, int k_steps) {
        Phase1Result r;
        {
          py::gil_scoped_release release;
          r = RunPhase1(spec, frame_budget, MakePhase1(patience, bin_width, k_steps), seed);
        }
        py::dict d;
        d["actions"] = Joined(r.best.Actions());
        d["reward"] = r.best.CumulativeReward();
        d["length"] = r.best.size();
        d["frames_used"] = r.stats.frames_used;
        d["frames_to_first_win"] = r.stats.frames_to_first_win;
        d["cells"] = r.stats.cells;
        return d;
      },
      py::arg("spec"), py::arg("frame_budget"), py::arg("seed") = 1,
      py::arg("patience") = kDefaultPatience, py::arg("bin_width") = kDefaultBinWidth,
      py::arg("k_steps") = kDefaultExploreSteps);

  m.def(
      "random_rollouts",
      [](const SpecPtr& spec, std::int64_t frame_budget, std::uint64_t seed) {
        const RolloutResult r = RandomRollouts(spec, frame_budget, seed);
        py::dict d;
        d["won"] = r.won();
        d["frames_to_first_win"] = r.frames_to_first_win;
        d["frames_used"] = r.frames_used;
        d["episodes"] = r.episodes;
        d["win_length"] = r.win_length;
        return d;
      },
      py::arg("spec"), py::arg("frame_budget"), py::arg("seed") = 1);

  py::class_<Corpus>(m, "Corpus")
      .def("__len__", &Corpus::size)
      .def_property_readonly("game_ids",
                             [](const Corpus& c) {
                               std::vector<std::string> ids;
                               for (const auto& e : c.manifest.games) ids.push_back(e.game_id);
                               return ids;
                             })
      .def_property_readonly("labels",
                             [](const Corpus& c) {
                               std::vector<std::string> out;
                               for (const auto& e : c.manifest.games) out.push_back(e.label);
                               return out;
                             })
      .def_property_readonly("specs",
                             [](const Corpus& c) {
                               std::vector<SpecPtr> out;
                               for (const auto& s : c.specs) out.push_back(std::const_pointer_cast<GameSpec>(s));
                               return out;
                             })
      .def("manifest_json", [](const Corpus& c) { return ManifestToJson(c.manifest).dump(); })
      .def("save", [](const Corpus& c, const std::string& dir) { SaveCorpus(c, dir); });

  m.def(
      "build_corpus",
      [](const std::string& scale, std::uint64_t seed, int games_per_level) {
        const auto s = ParseScale(scale);
        if (!s) throw py::value_error("scale must be desk or full");
        return BuildCorpus({*s, seed, games_per_level, {}});
      },
      py::arg("scale") = "desk", py::arg("seed") = 1, py::arg("games_per_level") = 0);
  m.def("load_corpus", [](const std::string& dir) { return LoadCorpus(dir); });
  m.def(
      "split_corpus",
      [](const Corpus& c, std::uint64_t seed, std::array<double, 3> ratios) {
        const CorpusSplit s = SplitCorpus(c.manifest, {ratios[0], ratios[1], ratios[2]}, seed);
        py::dict d;
        d["train"] = s.train;
        d["validation"] = s.validation;
        d["test"] = s.test;
        return d;
      },
      py::arg("corpus"), py::arg("seed") = 1,
      py::arg("ratios") = std::array<double, 3>{0.8, 0.1, 0.1});

  m.def(
      "run_setting",
      [](const std::string& setting, const std::string& model, const Corpus& corpus,
         const std::map<std::string, std::vector<std::string>>& trajectories,
         std::optional<std::uint64_t> split_seed, int workers, std::uint64_t seed,
         std::optional<int> hidden, std::optional<int> epochs, std::optional<int> episodes) {
        const auto s = ParseSetting(setting);
        const auto k = ParseModelKind(model);
        if (!s) throw py::value_error("unknown setting " + setting);
        if (!k) throw py::value_error("unknown model " + model);
        TrajectorySet trajs;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
          auto it = trajectories.find(corpus.manifest.games[i].game_id);
          if (it != trajectories.end()) trajs[it->first] = ReplayActions(corpus.specs[i], Split(it->second));
        }
        SettingConfig c = DeskSettingConfig();
        c.workers = workers;
        c.seed = c.policy.seed = c.rl.seed = c.dqn.seed = seed;
        if (hidden) c.policy.hidden = c.policy.emb_dim = c.rl.hidden = c.rl.emb_dim = *hidden;
        if (epochs) c.single_train.epochs = c.shared_train.epochs = *epochs;
        if (episodes) c.dqn.episodes = *episodes;
        std::optional<CorpusSplit> split;
        if (split_seed) split = SplitCorpus(corpus.manifest, {}, *split_seed);
        MetricsTable t;
        {
          py::gil_scoped_release release;
          t = RunSetting(*s, *k, corpus, trajs, split ? &*split : nullptr, c);
        }
        return Rows(t);
      },
      py::arg("setting"), py::arg("model"), py::arg("corpus"),
      py::arg("trajectories") = std::map<std::string, std::vector<std::string>>{},
      py::arg("split_seed") = py::none(), py::arg("workers") = 1, py::arg("seed") = 1,
      py::arg("hidden") = py::none(), py::arg("epochs") = py::none(), py::arg("episodes") = py::none());

  m.def(
      "exploration_comparison",
      [](std::vector<int> levels, std::vector<std::uint64_t> seeds, std::int64_t frame_budget,
         int patience, int workers) {
        ExplorationConfig c;
        c.levels = std::move(levels);
        c.seeds = std::move(seeds);
        c.frame_budget = frame_budget;
        c.phase1.patience = patience;
        c.workers = workers;
        std::vector<ExplorationRun> runs;
        {
          py::gil_scoped_release release;
          runs = ExplorationComparison(c);
        }
        py::list out;
        for (const ExplorationRun& r : runs) {
          py::dict d;
          d["method"] = r.method;
          d["level"] = r.level;
          d["seed"] = r.seed;
          d["optimum"] = r.optimum;
          d["won"] = r.won;
          d["frames_to_first_win"] = r.frames_to_first_win;
          d["win_length"] = r.win_length;
          out.append(d);
        }
        return out;
      },
      py::arg("levels"), py::arg("seeds"), py::arg("frame_budget") = 100000,
      py::arg("patience") = kDefaultPatience, py::arg("workers") = 1);

  m.def(
      "gradient_checks",
      [](int draws, std::uint64_t seed) {
        std::map<std::string, double> out;
        for (const auto& c : nn::CoreGradientChecks(draws, seed)) out[c.op] = c.max_rel_error;
        out["seq2seq"] = policy::PolicyGradientCheck(draws, seed);
        out["slot_q"] = rl::SlotModelGradientCheck(draws, seed);
        out["drrn"] = rl::DrrnGradientCheck(draws, seed);
        return out;
      },
      py::arg("draws") = 10, py::arg("seed") = 1);
}

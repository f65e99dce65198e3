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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gotext/engine/generator.h"
#include "gotext/harness/experiment.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace gotext;
using namespace gotext::harness;

namespace {

struct CliError : std::runtime_error {
  CliError(std::string kind, const std::string& message)
      : std::runtime_error(message), kind(std::move(kind)) {}
  std::string kind;
};

[[noreturn]] void MissingInput(const std::string& what) { throw CliError("MissingInput", what); }
[[noreturn]] void BadFlag(const std::string& what) { throw CliError("BadFlag", what); }

void RequireDir(const fs::path& dir, const std::string& flag) {
  if (dir.empty()) MissingInput(flag + " is required");
  if (!fs::is_directory(dir)) MissingInput(flag + " " + dir.string() + " does not exist");
}

void WriteJson(const fs::path& path, const json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

// Shared model and exploration flags.
struct Options {
  std::uint64_t seed = 1;
  int workers = 1;
  std::string corpus;
  std::string trajectories;
  std::string out;
  std::string embeddings;
  // explore
  std::int64_t frame_budget = 200000;
  double bin_width = kDefaultBinWidth;
  int k_steps = kDefaultExploreSteps;
  int patience = kDefaultPatience;
  int coin_level = 0;
  std::uint64_t coin_seed = 1;
  // models
  SettingConfig setting = DeskSettingConfig();
  bool no_prune = false;
};

void AddModelFlags(CLI::App* cmd, Options& o) {
  SettingConfig& s = o.setting;
  cmd->add_option("--emb-dim", s.policy.emb_dim, "Seq2Seq embedding width")->capture_default_str();
  cmd->add_option("--hidden", s.policy.hidden, "Seq2Seq hidden width")->capture_default_str();
  cmd->add_option("--epochs", s.single_train.epochs, "Seq2Seq epochs per game (single)")
      ->capture_default_str();
  cmd->add_option("--shared-epochs", s.shared_train.epochs, "Seq2Seq epochs (joint, zero-shot)")
      ->capture_default_str();
  cmd->add_option("--batch-size", s.single_train.batch_size, "Seq2Seq batch size (single)")
      ->capture_default_str();
  cmd->add_option("--shared-batch-size", s.shared_train.batch_size,
                  "Seq2Seq batch size (joint, zero-shot)")
      ->capture_default_str();
  cmd->add_option("--lr", s.single_train.adam.lr, "Seq2Seq learning rate (single)")
      ->capture_default_str();
  cmd->add_option("--shared-lr", s.shared_train.adam.lr, "Seq2Seq learning rate (joint, zero-shot)")
      ->capture_default_str();
  cmd->add_option("--target-loss", s.single_train.target_loss, "Early-stop loss")
      ->capture_default_str();
  cmd->add_option("--vocab-size", s.vocab_min_size, "Pad the vocabulary to this size")
      ->capture_default_str();
  cmd->add_flag("--freeze-embeddings", s.policy.freeze_embeddings, "Keep embeddings fixed");
  cmd->add_flag("--no-prune", o.no_prune, "Train on raw phase-1 trajectories");
  cmd->add_option("--rl-emb-dim", s.rl.emb_dim, "Q-model embedding width")->capture_default_str();
  cmd->add_option("--rl-hidden", s.rl.hidden, "Q-model hidden width")->capture_default_str();
  cmd->add_option("--episodes", s.dqn.episodes, "RL episodes per game")->capture_default_str();
  cmd->add_option("--gamma", s.dqn.gamma, "Discount")->capture_default_str();
  cmd->add_option("--eps-start", s.dqn.eps_start, "Initial epsilon")->capture_default_str();
  cmd->add_option("--eps-end", s.dqn.eps_end, "Final epsilon")->capture_default_str();
  cmd->add_option("--eps-steps", s.dqn.eps_steps, "Epsilon decay steps")->capture_default_str();
  cmd->add_option("--rl-batch-size", s.dqn.batch_size, "Replay batch size")->capture_default_str();
  cmd->add_option("--rl-lr", s.dqn.adam.lr, "Q-model learning rate")->capture_default_str();
  cmd->add_option("--target-sync", s.dqn.target_sync, "Target network sync interval")
      ->capture_default_str();
  cmd->add_option("--update-every", s.dqn.update_every, "Env steps per update")
      ->capture_default_str();
  cmd->add_option("--embeddings", o.embeddings, "GloVe text file: one 'token v1 ... vd' per line");
}

void FinishSettingConfig(Options& o, std::optional<WordVectors>& vectors) {
  SettingConfig& s = o.setting;
  s.prune_cycles = !o.no_prune;
  s.workers = o.workers;
  s.seed = o.seed;
  s.policy.seed = s.rl.seed = s.dqn.seed = o.seed;
  s.single_train.seed = s.shared_train.seed = o.seed;
  s.shared_train.target_loss = s.single_train.target_loss;
  s.rl.freeze_embeddings = s.policy.freeze_embeddings;
  if (!o.embeddings.empty()) {
    if (!fs::exists(o.embeddings)) MissingInput("embedding file " + o.embeddings + " not found");
    vectors = WordVectors::LoadGlove(o.embeddings);
    s.embeddings = &*vectors;
  }
}

Corpus RequireCorpus(const Options& o) {
  RequireDir(o.corpus, "--corpus");
  return LoadCorpus(o.corpus);
}

json BaseManifest(const std::string& command, const Options& o) {
  return {{"command", command}, {"seed", o.seed}, {"workers", o.workers},
          {"corpus", o.corpus}, {"trajectories", o.trajectories}, {"embeddings", o.embeddings}};
}

int CmdGen(const Options& o, const std::string& scale_name, int per_level) {
  const auto scale = ParseScale(scale_name);
  if (!scale) BadFlag("--scale must be desk or full");
  if (o.out.empty()) MissingInput("--out is required");
  CorpusOptions opts{*scale, o.seed, per_level, {}};
  const Corpus corpus = BuildCorpus(opts);
  SaveCorpus(corpus, o.out);
  std::cout << json{{"games", corpus.size()}, {"out", o.out}}.dump() << "\n";
  return 0;
}

Phase1Config MakePhase1(const Options& o) {
  Phase1Config c;
  c.bin_width = o.bin_width;
  c.k_steps = o.k_steps;
  c.patience = o.patience;
  return c;
}

int CmdExplore(Options& o) {
  if (o.out.empty()) MissingInput("--out is required");
  Corpus corpus;
  if (o.coin_level > 0) {
    auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(o.coin_level, o.coin_seed));
    corpus.manifest.scale = "coin";
    corpus.manifest.seed = o.coin_seed;
    corpus.manifest.games.push_back({spec->game_id, Family::kCoin, "level" + std::to_string(o.coin_level),
                                     spec->game_id + ".json", o.coin_seed});
    corpus.specs.push_back(spec);
  } else {
    corpus = RequireCorpus(o);
  }
  std::optional<WordVectors> vectors;
  ExploreOptions opts;
  opts.frame_budget = o.frame_budget;
  opts.phase1 = MakePhase1(o);
  if (!o.embeddings.empty()) {
    if (!fs::exists(o.embeddings)) MissingInput("embedding file " + o.embeddings + " not found");
    vectors = WordVectors::LoadGlove(o.embeddings);
    opts.phase1.embeddings = &*vectors;
  }
  opts.seed = o.seed;
  opts.workers = o.workers;
  const ExploreOutcome result = ExploreCorpus(corpus, opts);
  const fs::path out = o.out;
  SaveTrajectories(corpus, result.trajectories, out / "trajectories", o.seed);
  json stats = json::object();
  for (const auto& [id, s] : result.stats) stats[id] = ArchiveStatsToJson(s);
  WriteJson(out / "explore_stats.json", stats);
  const MetricsTable table = Phase1Table(corpus, result.trajectories);
  WriteMetricsCsv(out / "metrics.csv", {table});
  json manifest = BaseManifest("explore", o);
  manifest["frame_budget"] = o.frame_budget;
  manifest["phase1"] = Phase1ConfigToJson(opts.phase1);
  if (o.coin_level > 0) manifest["coin"] = {{"level", o.coin_level}, {"seed", o.coin_seed}};
  WriteJson(out / "run_manifest.json", manifest);
  std::cout << json{{"games", corpus.size()}, {"score", table.total_score()},
                    {"max_score", table.total_max_score()}, {"wins", table.wins()}}
                   .dump()
            << "\n";
  return 0;
}

int CmdTrain(Options& o, const std::string& model_name) {
  const auto kind = ParseModelKind(model_name);
  if (!kind || *kind == ModelKind::kRandom) {
    BadFlag("--model must be seq2seq, lstm-dqn, lstm-dqn-adm or drrn");
  }
  if (o.out.empty()) MissingInput("--out is required");
  const Corpus corpus = RequireCorpus(o);
  std::optional<WordVectors> vectors;
  FinishSettingConfig(o, vectors);
  const SettingConfig& s = o.setting;
  const fs::path out = o.out;
  fs::create_directories(out);
  json manifest = BaseManifest("train", o);
  manifest["model"] = model_name;
  manifest["config"] = SettingConfigToJson(s);
  if (*kind == ModelKind::kSeq2Seq) {
    RequireDir(o.trajectories, "--trajectories");
    const TrajectorySet trajs = LoadTrajectories(corpus, o.trajectories);
    std::set<std::string> words;
    std::vector<Trajectory> data;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto w = EngineVocabulary(*corpus.specs[i]);
      words.insert(w.begin(), w.end());
      auto it = trajs.find(corpus.manifest.games[i].game_id);
      if (it == trajs.end()) {
        throw MissingTrajectory("no trajectory for " + corpus.manifest.games[i].game_id);
      }
      data.push_back(s.prune_cycles ? PruneStateCycles(corpus.specs[i], it->second) : it->second);
    }
    const nn::Vocab vocab = nn::Vocab::Build(words, s.vocab_min_size);
    policy::PolicyModel model(vocab, s.policy, s.embeddings);
    const policy::TrainConfig& tc = corpus.size() == 1 ? s.single_train : s.shared_train;
    const auto result =
        policy::Train(model, policy::BuildDataset(data, vocab, s.policy.max_input_tokens), tc);
    model.Save(out / "model.bin", {{"train", policy::TrainConfigToJson(tc)}});
    manifest["epoch_loss"] = result.epoch_loss;
  } else {
    std::vector<const GameSpec*> specs;
    for (const auto& p : corpus.specs) specs.push_back(p.get());
    rl::AgentKind agent_kind = *kind == ModelKind::kDrrn        ? rl::AgentKind::kDrrn
                               : *kind == ModelKind::kLstmDqnAdm ? rl::AgentKind::kLstmDqnAdm
                                                                 : rl::AgentKind::kLstmDqn;
    rl::Agent agent = rl::Agent::Create(agent_kind, specs, s.rl, s.embeddings);
    rl::DqnConfig dqn = s.dqn;
    dqn.episodes *= static_cast<int>(corpus.size());
    dqn.eps_steps *= static_cast<int>(corpus.size());
    const rl::DqnResult result = rl::DqnTrain(agent, corpus.specs, dqn);
    agent.Save(out / "model.bin", {{"dqn", rl::DqnConfigToJson(dqn)}});
    manifest["episode_scores"] = result.episode_scores;
    manifest["updates"] = result.updates;
  }
  WriteJson(out / "run_manifest.json", manifest);
  std::cout << json{{"model", model_name}, {"checkpoint", (out / "model.bin").string()}}.dump()
            << "\n";
  return 0;
}

int CmdEval(Options& o, const std::vector<std::string>& settings,
            const std::vector<std::string>& models, double split_seed_d) {
  if (o.out.empty()) MissingInput("--out is required");
  const Corpus corpus = RequireCorpus(o);
  std::optional<WordVectors> vectors;
  FinishSettingConfig(o, vectors);
  TrajectorySet trajs;
  if (!o.trajectories.empty()) {
    RequireDir(o.trajectories, "--trajectories");
    trajs = LoadTrajectories(corpus, o.trajectories);
  }
  const auto split_seed = static_cast<std::uint64_t>(split_seed_d);
  const CorpusSplit split = SplitCorpus(corpus.manifest, {}, split_seed);
  std::vector<MetricsTable> tables;
  if (!trajs.empty()) tables.push_back(Phase1Table(corpus, trajs));
  for (const std::string& sn : settings) {
    const auto setting = ParseSetting(sn);
    if (!setting) BadFlag("unknown setting " + sn);
    for (const std::string& mn : models) {
      const auto model = ParseModelKind(mn);
      if (!model) BadFlag("unknown model " + mn);
      if (*model == ModelKind::kSeq2Seq && o.trajectories.empty()) {
        MissingInput("--trajectories is required for seq2seq");
      }
      tables.push_back(RunSetting(*setting, *model, corpus, trajs, &split, o.setting));
      VerifyWins(tables.back(), corpus);
    }
  }
  const fs::path out = o.out;
  WriteMetricsCsv(out / "metrics.csv", tables);
  WriteBreakdownCsv(out / "breakdown.csv", tables);
  WriteEpisodesJsonl(out / "episodes.jsonl", tables);
  WriteJson(out / "split.json", SplitToJson(split));
  json manifest = BaseManifest("eval", o);
  manifest["settings"] = settings;
  manifest["models"] = models;
  manifest["split_seed"] = split_seed;
  manifest["config"] = SettingConfigToJson(o.setting);
  json totals = json::array();
  for (const MetricsTable& t : tables) {
    totals.push_back({{"setting", t.setting}, {"model", t.model}, {"score", t.total_score()},
                      {"max_score", t.total_max_score()}, {"steps", t.total_steps()},
                      {"wins", t.wins()}, {"games", t.rows.size()}});
  }
  manifest["totals"] = totals;
  WriteJson(out / "run_manifest.json", manifest);
  std::cout << totals.dump() << "\n";
  return 0;
}

int CmdCompare(Options& o, const std::vector<int>& levels, const std::vector<std::uint64_t>& seeds) {
  if (o.out.empty()) MissingInput("--out is required");
  ExplorationConfig c;
  c.levels = levels;
  c.seeds = seeds;
  c.frame_budget = o.frame_budget;
  c.phase1 = MakePhase1(o);
  c.workers = o.workers;
  const auto runs = ExplorationComparison(c);
  const fs::path out = o.out;
  WriteExplorationCurves(out / "exploration_curves.csv", runs);
  WriteExplorationSummary(out / "exploration_summary.csv", runs);
  json manifest = BaseManifest("compare-explore", o);
  manifest["exploration"] = ExplorationConfigToJson(c);
  WriteJson(out / "run_manifest.json", manifest);
  int wins = 0;
  for (const auto& r : runs) wins += r.won;
  std::cout << json{{"runs", runs.size()}, {"wins", wins}}.dump() << "\n";
  return 0;
}

void PrintObservation(const Observation& obs) {
  std::cout << "D: " << JoinTokens(obs.description) << "\n"
            << "I: " << JoinTokens(obs.inventory) << "\n"
            << "Q: " << JoinTokens(obs.quest) << "\n"
            << "F: " << JoinTokens(obs.feedback) << "\n";
}

int CmdPlay(Options& o, const std::string& spec_file, const std::string& game_id) {
  std::shared_ptr<const GameSpec> spec;
  if (o.coin_level > 0) {
    spec = std::make_shared<const GameSpec>(GenerateCoinGame(o.coin_level, o.coin_seed));
  } else if (!spec_file.empty()) {
    if (!fs::exists(spec_file)) MissingInput("spec file " + spec_file + " not found");
    spec = std::make_shared<const GameSpec>(LoadSpec(spec_file));
  } else {
    const Corpus corpus = RequireCorpus(o);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus.manifest.games[i].game_id == game_id) spec = corpus.specs[i];
    }
    if (!spec) MissingInput("game " + game_id + " is not in the corpus");
  }
  TextGame game(spec);
  PrintObservation(game.observation());
  std::string line;
  while (!game.state().done && std::cout << "> " << std::flush && std::getline(std::cin, line)) {
    const Tokens action = Tokenize(line);
    if (action.empty()) continue;
    const auto outcome = game.Step(action);
    PrintObservation(game.observation());
    std::cout << "reward " << outcome.reward << " score " << game.state().cumulative_reward << "/"
              << spec->max_score << (outcome.done ? " done" : "") << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Go-Explore toolkit for text games"};
  app.set_config("--config", "", "TOML config file; flags override it");
  app.require_subcommand(1);
  Options o;
  auto common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", o.seed, "Run seed")->capture_default_str();
    cmd->add_option("--out", o.out, "Output directory");
  };
  auto phase1_flags = [&](CLI::App* cmd) {
    cmd->add_option("--frame-budget,--budget", o.frame_budget, "Frames per game")
        ->capture_default_str();
    cmd->add_option("--bin-width", o.bin_width, "Cell embedding bin width")->capture_default_str();
    cmd->add_option("--k-steps", o.k_steps, "Random steps per exploration")->capture_default_str();
    cmd->add_option("--patience", o.patience, "Iterations without improvement before stopping")
        ->capture_default_str();
    cmd->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  };

  std::string scale = "desk";
  int per_level = 0;
  CLI::App* gen = app.add_subcommand("gen", "Generate a cooking-game corpus");
  common(gen);
  gen->add_option("--scale", scale, "desk or full")->capture_default_str();
  gen->add_option("--games-per-level", per_level, "Override games per level");

  CLI::App* explore = app.add_subcommand("explore", "Run phase-1 exploration");
  common(explore);
  phase1_flags(explore);
  explore->add_option("--corpus", o.corpus, "Corpus directory");
  explore->add_option("--coin-level", o.coin_level, "Explore one coin game of this level");
  explore->add_option("--coin-seed", o.coin_seed, "Seed of that coin game");
  explore->add_option("--embeddings", o.embeddings, "GloVe text file for cell keys");

  std::string model = "seq2seq";
  CLI::App* train = app.add_subcommand("train", "Train one model on every game of a corpus");
  common(train);
  train->add_option("--model", model, "seq2seq, lstm-dqn, lstm-dqn-adm or drrn")
      ->capture_default_str();
  train->add_option("--corpus", o.corpus, "Corpus directory");
  train->add_option("--trajectories", o.trajectories, "Phase-1 trajectory directory");
  train->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  AddModelFlags(train, o);

  std::vector<std::string> settings = {"single"};
  std::vector<std::string> models = {"seq2seq"};
  double split_seed = 1;
  CLI::App* eval = app.add_subcommand("eval", "Train and evaluate models in the given settings");
  common(eval);
  eval->add_option("--setting", settings, "single, joint, zero_shot")->delimiter(',');
  eval->add_option("--model", models, "seq2seq, lstm-dqn, lstm-dqn-adm, drrn, random")
      ->delimiter(',');
  eval->add_option("--corpus", o.corpus, "Corpus directory");
  eval->add_option("--trajectories", o.trajectories, "Phase-1 trajectory directory");
  eval->add_option("--split-seed", split_seed, "Seed of the stratified split")->capture_default_str();
  eval->add_option("--workers", o.workers, "Worker threads")->capture_default_str();
  AddModelFlags(eval, o);

  std::vector<int> levels = {5, 10, 15};
  std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
  CLI::App* compare = app.add_subcommand("compare-explore", "Go-Explore versus random rollouts");
  common(compare);
  phase1_flags(compare);
  compare->add_option("--levels", levels, "Coin levels")->delimiter(',');
  compare->add_option("--seeds", seeds, "Coin game seeds")->delimiter(',');

  std::string spec_file, game_id;
  CLI::App* play = app.add_subcommand("play", "Play one game from the terminal");
  play->add_option("--spec", spec_file, "Game spec JSON");
  play->add_option("--corpus", o.corpus, "Corpus directory");
  play->add_option("--game", game_id, "Game id within --corpus");
  play->add_option("--coin-level", o.coin_level, "Play a coin game of this level");
  play->add_option("--coin-seed", o.coin_seed, "Seed of that coin game");

  auto fail = [](const std::string& kind, const std::string& message, int code) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
    return code;
  };
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("BadFlag", e.what(), 2);
  }
  if (o.workers < 1) return fail("BadFlag", "--workers must be at least 1", 2);
  if (o.frame_budget < 0) return fail("BadFlag", "--frame-budget must be non-negative", 2);
  try {
    if (*gen) return CmdGen(o, scale, per_level);
    if (*explore) return CmdExplore(o);
    if (*train) return CmdTrain(o, model);
    if (*eval) return CmdEval(o, settings, models, split_seed);
    if (*compare) return CmdCompare(o, levels, seeds);
    if (*play) return CmdPlay(o, spec_file, game_id);
  } catch (const CliError& e) {
    return fail(e.kind, e.what(), e.kind == "BadFlag" ? 2 : 3);
  } catch (const MissingTrajectory& e) {
    return fail("MissingTrajectory", e.what(), 3);
  } catch (const CorpusError& e) {
    return fail("MissingInput", e.what(), 3);
  } catch (const std::invalid_argument& e) {
    return fail("BadInput", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("Error", e.what(), 1);
  }
  return 0;
}

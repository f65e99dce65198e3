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

#include "gotext/harness/experiment.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "gotext/engine/generator.h"
#include "gotext/engine/oracle.h"

namespace gotext::harness {

namespace fs = std::filesystem;
using nlohmann::json;

void ParallelFor(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(workers, 1)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string_view SettingName(Setting setting) {
  switch (setting) {
    case Setting::kSingle: return "single";
    case Setting::kJoint: return "joint";
    case Setting::kZeroShot: return "zero_shot";
  }
  return "?";
}

std::optional<Setting> ParseSetting(std::string_view name) {
  for (Setting s : {Setting::kSingle, Setting::kJoint, Setting::kZeroShot}) {
    if (SettingName(s) == name) return s;
  }
  if (name == "zero-shot") return Setting::kZeroShot;
  return std::nullopt;
}

std::string_view ModelName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSeq2Seq: return "seq2seq";
    case ModelKind::kLstmDqn: return "lstm-dqn";
    case ModelKind::kLstmDqnAdm: return "lstm-dqn-adm";
    case ModelKind::kDrrn: return "drrn";
    case ModelKind::kRandom: return "random";
  }
  return "?";
}

std::optional<ModelKind> ParseModelKind(std::string_view name) {
  for (ModelKind k : {ModelKind::kSeq2Seq, ModelKind::kLstmDqn, ModelKind::kLstmDqnAdm,
                      ModelKind::kDrrn, ModelKind::kRandom}) {
    if (ModelName(k) == name) return k;
  }
  return std::nullopt;
}

int MetricsTable::total_score() const {
  int s = 0;
  for (const GameResult& r : rows) s += r.score;
  return s;
}

int MetricsTable::total_max_score() const {
  int s = 0;
  for (const GameResult& r : rows) s += r.max_score;
  return s;
}

int MetricsTable::total_steps() const {
  int s = 0;
  for (const GameResult& r : rows) s += r.steps;
  return s;
}

int MetricsTable::wins() const {
  int s = 0;
  for (const GameResult& r : rows) s += r.win;
  return s;
}

double MetricsTable::normalized_score() const {
  const int m = total_max_score();
  return m > 0 ? static_cast<double>(total_score()) / m : 0.0;
}

GameResult ScoreActions(const std::shared_ptr<const GameSpec>& spec, const std::string& label,
                        const std::vector<Tokens>& actions) {
  TextGame game(spec);
  GameResult r;
  r.game_id = spec->game_id;
  r.label = label;
  r.max_score = spec->max_score;
  for (const Tokens& a : actions) {
    if (game.state().done) throw ReplayDivergence("actions continue after the game ended");
    game.Step(a);
    r.actions.push_back(a);
  }
  r.score = game.state().cumulative_reward;
  r.steps = game.state().step_count;
  r.win = game.state().won;
  return r;
}

namespace {

std::size_t IndexOf(const Corpus& corpus, const std::string& game_id) {
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (corpus.manifest.games[i].game_id == game_id) return i;
  }
  throw CorpusError("unknown game id " + game_id);
}

std::vector<std::size_t> Indices(const Corpus& corpus, const std::vector<std::string>& ids) {
  std::vector<std::size_t> out;
  for (const std::string& id : ids) out.push_back(IndexOf(corpus, id));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> AllIndices(const Corpus& corpus) {
  std::vector<std::size_t> out(corpus.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = i;
  return out;
}

GameResult FromEpisode(const std::shared_ptr<const GameSpec>& spec, const std::string& label,
                       int score, int max_score, int steps, bool win,
                       std::vector<Tokens> actions) {
  GameResult r;
  r.game_id = spec->game_id;
  r.label = label;
  r.score = score;
  r.max_score = max_score;
  r.steps = steps;
  r.win = win;
  r.actions = std::move(actions);
  return r;
}

}  // namespace

void VerifyWins(const MetricsTable& table, const Corpus& corpus) {
  for (const GameResult& r : table.rows) {
    if (!r.win) continue;
    const std::size_t i = IndexOf(corpus, r.game_id);
    const GameResult replay = ScoreActions(corpus.specs[i], r.label, r.actions);
    if (!replay.win || replay.score != corpus.specs[i]->max_score || replay.score != r.score) {
      throw ReplayDivergence("reported win on " + r.game_id + " does not replay");
    }
  }
}

ExploreOutcome ExploreCorpus(const Corpus& corpus, const ExploreOptions& options) {
  std::vector<Phase1Result> results(corpus.size());
  ParallelFor(corpus.size(), options.workers, [&](std::size_t i) {
    results[i] = RunPhase1(corpus.specs[i], options.frame_budget, options.phase1, options.seed);
  });
  ExploreOutcome out;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string& id = corpus.manifest.games[i].game_id;
    out.trajectories[id] = std::move(results[i].best);
    out.stats[id] = std::move(results[i].stats);
  }
  return out;
}

MetricsTable Phase1Table(const Corpus& corpus, const TrajectorySet& trajectories) {
  MetricsTable t{"phase1", "go-explore", {}};
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const CorpusEntry& e = corpus.manifest.games[i];
    auto it = trajectories.find(e.game_id);
    if (it == trajectories.end()) throw MissingTrajectory("no trajectory for " + e.game_id);
    t.rows.push_back(ScoreActions(corpus.specs[i], e.label, it->second.Actions()));
  }
  return t;
}

void SaveTrajectories(const Corpus& corpus, const TrajectorySet& trajectories, const fs::path& dir,
                      std::uint64_t seed) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    const std::string& id = corpus.manifest.games[i].game_id;
    auto it = trajectories.find(id);
    if (it == trajectories.end()) continue;
    SaveTrajectory(dir / (id + ".jsonl"), {it->second, corpus.specs[i]->max_score, seed});
  }
}

TrajectorySet LoadTrajectories(const Corpus& corpus, const fs::path& dir) {
  TrajectorySet out;
  for (const CorpusEntry& e : corpus.manifest.games) {
    const fs::path path = dir / (e.game_id + ".jsonl");
    if (fs::exists(path)) out[e.game_id] = LoadTrajectory(path).trajectory;
  }
  return out;
}

SettingConfig DeskSettingConfig() {
  SettingConfig c;
  c.policy.emb_dim = 32;
  c.policy.hidden = 32;
  c.policy.seed = 1;
  c.single_train.epochs = 200;
  c.single_train.batch_size = 1;
  c.single_train.adam.lr = 0.01;
  c.single_train.target_loss = 0.01;
  c.single_train.seed = 1;
  c.shared_train.epochs = 100;
  c.shared_train.batch_size = 1;
  c.shared_train.adam.lr = 0.003;
  c.shared_train.target_loss = 0.01;
  c.shared_train.seed = 1;
  c.rl.emb_dim = 32;
  c.rl.hidden = 32;
  c.rl.seed = 1;
  c.dqn.episodes = 100;
  c.dqn.batch_size = 16;
  c.dqn.update_every = 4;
  c.dqn.adam.lr = 0.003;
  c.dqn.eps_steps = 1500;
  c.dqn.target_sync = 500;
  c.dqn.seed = 1;
  return c;
}

json SettingConfigToJson(const SettingConfig& c) {
  return {{"policy", policy::PolicyConfigToJson(c.policy)},
          {"single_train", policy::TrainConfigToJson(c.single_train)},
          {"shared_train", policy::TrainConfigToJson(c.shared_train)},
          {"rl", rl::RlConfigToJson(c.rl)},
          {"dqn", rl::DqnConfigToJson(c.dqn)},
          {"prune_cycles", c.prune_cycles},
          {"vocab_min_size", c.vocab_min_size},
          {"max_steps", c.max_steps},
          {"seed", c.seed},
          {"pretrained_embeddings", c.embeddings != nullptr}};
}

namespace {

Trajectory TrainingTrajectory(const Corpus& corpus, std::size_t i, const TrajectorySet& trajectories,
                              bool prune) {
  const std::string& id = corpus.manifest.games[i].game_id;
  auto it = trajectories.find(id);
  if (it == trajectories.end()) throw MissingTrajectory("no phase-1 trajectory for " + id);
  return prune ? PruneStateCycles(corpus.specs[i], it->second) : it->second;
}

GameResult PlayPolicy(const policy::PolicyModel& model, const Corpus& corpus, std::size_t i,
                      int max_steps) {
  const policy::PlayResult p = policy::Play(model, corpus.specs[i], max_steps);
  return FromEpisode(corpus.specs[i], corpus.manifest.games[i].label, p.score, p.max_score,
                     p.steps, p.win, p.actions);
}

GameResult PlayAgent(const rl::Agent& agent, const Corpus& corpus, std::size_t i, int max_steps) {
  const rl::EpisodeResult e = rl::PlayGreedy(agent, corpus.specs[i], max_steps);
  return FromEpisode(corpus.specs[i], corpus.manifest.games[i].label, e.score, e.max_score,
                     e.steps, e.win, e.actions);
}

rl::AgentKind ToAgentKind(ModelKind kind) {
  switch (kind) {
    case ModelKind::kLstmDqn: return rl::AgentKind::kLstmDqn;
    case ModelKind::kLstmDqnAdm: return rl::AgentKind::kLstmDqnAdm;
    case ModelKind::kDrrn: return rl::AgentKind::kDrrn;
    default: throw std::invalid_argument("not an RL model");
  }
}

std::set<std::string> CorpusVocabulary(const Corpus& corpus) {
  std::set<std::string> words;
  for (const auto& spec : corpus.specs) {
    const std::set<std::string> w = EngineVocabulary(*spec);
    words.insert(w.begin(), w.end());
  }
  return words;
}

}  // namespace

MetricsTable RunSetting(Setting setting, ModelKind kind, const Corpus& corpus,
                        const TrajectorySet& trajectories, const CorpusSplit* split,
                        const SettingConfig& config) {
  if (setting == Setting::kZeroShot && split == nullptr) {
    throw std::invalid_argument("zero-shot setting needs a corpus split");
  }
  MetricsTable table{std::string(SettingName(setting)), std::string(ModelName(kind)), {}};
  const std::vector<std::size_t> eval =
      setting == Setting::kZeroShot ? Indices(corpus, split->test) : AllIndices(corpus);
  const std::vector<std::size_t> train =
      setting == Setting::kZeroShot ? Indices(corpus, split->train) : AllIndices(corpus);
  if (kind != ModelKind::kRandom && setting == Setting::kZeroShot && train.empty()) {
    throw std::invalid_argument("zero-shot training split is empty");
  }
  std::vector<GameResult> rows(eval.size());

  if (kind == ModelKind::kRandom) {
    ParallelFor(eval.size(), config.workers, [&](std::size_t k) {
      const std::size_t i = eval[k];
      const rl::EpisodeResult e = rl::PlayRandom(
          corpus.specs[i], DeriveSeed(config.seed, corpus.manifest.games[i].game_id),
          config.max_steps);
      rows[k] = FromEpisode(corpus.specs[i], corpus.manifest.games[i].label, e.score,
                            e.max_score, e.steps, e.win, e.actions);
    });
  } else if (kind == ModelKind::kSeq2Seq && setting == Setting::kSingle) {
    ParallelFor(eval.size(), config.workers, [&](std::size_t k) {
      const std::size_t i = eval[k];
      const Trajectory traj = TrainingTrajectory(corpus, i, trajectories, config.prune_cycles);
      nn::Vocab vocab = nn::Vocab::Build(EngineVocabulary(*corpus.specs[i]), config.vocab_min_size);
      policy::PolicyModel model(vocab, config.policy, config.embeddings);
      const auto data = policy::BuildDataset({traj}, vocab, config.policy.max_input_tokens);
      const policy::TrainResult fit = policy::Train(model, data, config.single_train);
      rows[k] = PlayPolicy(model, corpus, i, config.max_steps);
      rows[k].train_loss = fit.epoch_loss.empty() ? -1 : fit.epoch_loss.back();
      rows[k].memorised = std::all_of(data.begin(), data.end(), [&](const policy::Example& e) {
        return model.DecodeGreedy(e.input).ids == e.target;
      });
    });
  } else if (kind == ModelKind::kSeq2Seq) {
    nn::Vocab vocab = nn::Vocab::Build(CorpusVocabulary(corpus), config.vocab_min_size);
    std::vector<Trajectory> train_trajs(train.size());
    ParallelFor(train.size(), config.workers, [&](std::size_t k) {
      train_trajs[k] = TrainingTrajectory(corpus, train[k], trajectories, config.prune_cycles);
    });
    std::vector<Trajectory> val_trajs;
    if (setting == Setting::kZeroShot) {
      for (std::size_t i : Indices(corpus, split->validation)) {
        if (trajectories.contains(corpus.manifest.games[i].game_id)) {
          val_trajs.push_back(TrainingTrajectory(corpus, i, trajectories, config.prune_cycles));
        }
      }
    }
    policy::PolicyModel model(vocab, config.policy, config.embeddings);
    const auto data = policy::BuildDataset(train_trajs, vocab, config.policy.max_input_tokens);
    const auto val = policy::BuildDataset(val_trajs, vocab, config.policy.max_input_tokens);
    policy::Train(model, data, config.shared_train, val.empty() ? nullptr : &val);
    ParallelFor(eval.size(), config.workers, [&](std::size_t k) {
      rows[k] = PlayPolicy(model, corpus, eval[k], config.max_steps);
    });
  } else if (setting == Setting::kSingle) {
    ParallelFor(eval.size(), config.workers, [&](std::size_t k) {
      const std::size_t i = eval[k];
      rl::Agent agent =
          rl::Agent::Create(ToAgentKind(kind), {corpus.specs[i].get()}, config.rl, config.embeddings);
      rl::DqnTrain(agent, {corpus.specs[i]}, config.dqn);
      rows[k] = PlayAgent(agent, corpus, i, config.max_steps);
    });
  } else {
    std::vector<const GameSpec*> all;
    for (const auto& s : corpus.specs) all.push_back(s.get());
    std::vector<std::shared_ptr<const GameSpec>> games;
    for (std::size_t i : train) games.push_back(corpus.specs[i]);
    rl::Agent agent = rl::Agent::Create(ToAgentKind(kind), all, config.rl, config.embeddings);
    rl::DqnConfig dqn = config.dqn;
    const int n = static_cast<int>(games.size());
    dqn.episodes *= n;
    dqn.eps_steps *= n;
    rl::DqnTrain(agent, games, dqn);
    ParallelFor(eval.size(), config.workers, [&](std::size_t k) {
      rows[k] = PlayAgent(agent, corpus, eval[k], config.max_steps);
    });
  }
  table.rows = std::move(rows);
  return table;
}

namespace {

std::ofstream OpenOut(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

std::vector<std::string> SplitCsv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

}  // namespace

void WriteMetricsCsv(const fs::path& path, const std::vector<MetricsTable>& tables) {
  std::ofstream out = OpenOut(path);
  out << "setting,model,game_id,label,score,max_score,steps,win\n";
  for (const MetricsTable& t : tables) {
    for (const GameResult& r : t.rows) {
      out << t.setting << ',' << t.model << ',' << r.game_id << ',' << r.label << ',' << r.score
          << ',' << r.max_score << ',' << r.steps << ',' << (r.win ? 1 : 0) << '\n';
    }
  }
}

std::vector<MetricsTable> ReadMetricsCsv(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  std::vector<MetricsTable> tables;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = SplitCsv(line);
    if (f.size() != 8) throw std::runtime_error("bad metrics row: " + line);
    if (tables.empty() || tables.back().setting != f[0] || tables.back().model != f[1]) {
      tables.push_back({f[0], f[1], {}});
    }
    GameResult r;
    r.game_id = f[2];
    r.label = f[3];
    r.score = std::stoi(f[4]);
    r.max_score = std::stoi(f[5]);
    r.steps = std::stoi(f[6]);
    r.win = f[7] == "1";
    tables.back().rows.push_back(std::move(r));
  }
  return tables;
}

void WriteBreakdownCsv(const fs::path& path, const std::vector<MetricsTable>& tables) {
  std::ofstream out = OpenOut(path);
  out << "setting,model,label,difficulty,games,score,max_score,normalized\n";
  char buf[32];
  for (const MetricsTable& t : tables) {
    struct Agg {
      int games = 0, score = 0, max_score = 0;
    };
    std::map<std::string, Agg> by_label;
    for (const GameResult& r : t.rows) {
      Agg& a = by_label[r.label];
      ++a.games;
      a.score += r.score;
      a.max_score += r.max_score;
    }
    std::vector<std::pair<int, std::string>> order;
    for (const auto& [label, agg] : by_label) {
      int rank = 0;
      try {
        rank = DifficultyRank(SkillConfig::FromLabel(label));
      } catch (const SpecError&) {
      }
      order.emplace_back(rank, label);
    }
    std::sort(order.begin(), order.end());
    for (const auto& [rank, label] : order) {
      const Agg& a = by_label[label];
      std::snprintf(buf, sizeof buf, "%.6f",
                    a.max_score > 0 ? static_cast<double>(a.score) / a.max_score : 0.0);
      out << t.setting << ',' << t.model << ',' << label << ',' << rank << ',' << a.games << ','
          << a.score << ',' << a.max_score << ',' << buf << '\n';
    }
  }
}

void WriteEpisodesJsonl(const fs::path& path, const std::vector<MetricsTable>& tables) {
  std::ofstream out = OpenOut(path);
  for (const MetricsTable& t : tables) {
    for (const GameResult& r : t.rows) {
      json actions = json::array();
      for (const Tokens& a : r.actions) actions.push_back(JoinTokens(a));
      out << json{{"setting", t.setting}, {"model", t.model}, {"game_id", r.game_id},
                  {"score", r.score},     {"win", r.win},     {"actions", actions}}
                 .dump()
          << '\n';
    }
  }
}

json Phase1ConfigToJson(const Phase1Config& c) {
  return {{"bin_width", c.bin_width},           {"k_steps", c.k_steps},
          {"patience", c.patience},             {"embedding_dim", c.embedding_dim},
          {"embedding_seed", c.embedding_seed}, {"reward_power", c.reward_power},
          {"key_inventory", c.key_inventory},   {"custom_embeddings", c.embeddings != nullptr}};
}

json ExplorationConfigToJson(const ExplorationConfig& c) {
  return {{"levels", c.levels},
          {"seeds", c.seeds},
          {"frame_budget", c.frame_budget},
          {"phase1", Phase1ConfigToJson(c.phase1)}};
}

std::vector<ExplorationRun> ExplorationComparison(const ExplorationConfig& config) {
  struct Job {
    int level;
    std::uint64_t seed;
    bool random;
  };
  std::vector<Job> jobs;
  for (int level : config.levels) {
    for (std::uint64_t seed : config.seeds) {
      jobs.push_back({level, seed, false});
      jobs.push_back({level, seed, true});
    }
  }
  std::vector<ExplorationRun> runs(jobs.size());
  ParallelFor(jobs.size(), config.workers, [&](std::size_t k) {
    const Job& job = jobs[k];
    auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(job.level, job.seed));
    ExplorationRun& run = runs[k];
    run.level = job.level;
    run.seed = job.seed;
    run.optimum = BfsShortestWin(*spec);
    if (job.random) {
      const RolloutResult r = RandomRollouts(spec, config.frame_budget, job.seed);
      run.method = "random-rollout";
      run.won = r.won();
      run.frames_to_first_win = r.frames_to_first_win;
      run.win_length = r.win_length;
      run.frames_used = r.frames_used;
      run.progress = r.progress;
    } else {
      const Phase1Result r = RunPhase1(spec, config.frame_budget, config.phase1, job.seed);
      run.method = "go-explore";
      run.won = r.stats.frames_to_first_win >= 0;
      run.frames_to_first_win = r.stats.frames_to_first_win;
      run.win_length = run.won ? static_cast<int>(r.best.size()) : 0;
      run.frames_used = r.stats.frames_used;
      run.progress = r.stats.progress;
    }
  });
  return runs;
}

void WriteExplorationCurves(const fs::path& path, const std::vector<ExplorationRun>& runs) {
  std::ofstream out = OpenOut(path);
  out << "method,level,seed,frames,reward,length\n";
  for (const ExplorationRun& r : runs) {
    for (const ProgressPoint& p : r.progress) {
      out << r.method << ',' << r.level << ',' << r.seed << ',' << p.frames << ',' << p.reward
          << ',' << p.length << '\n';
    }
  }
}

void WriteExplorationSummary(const fs::path& path, const std::vector<ExplorationRun>& runs) {
  std::ofstream out = OpenOut(path);
  out << "method,level,seed,optimum,won,frames_to_first_win,win_length,frames_used\n";
  for (const ExplorationRun& r : runs) {
    out << r.method << ',' << r.level << ',' << r.seed << ',' << r.optimum << ','
        << (r.won ? 1 : 0) << ',' << r.frames_to_first_win << ',' << r.win_length << ','
        << r.frames_used << '\n';
  }
}

}  // namespace gotext::harness

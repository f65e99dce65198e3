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

#include <algorithm>
#include <map>
#include <cmath>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gotext/engine/generator.h"
#include "gotext/engine/oracle.h"
#include "gotext/explore/phase1.h"

namespace gotext {
namespace {

WordVectors TwoDimVectors() {
  WordVectors v(2);
  v.Set("red", std::vector<double>{2.4, -7.6});
  v.Set("apple", std::vector<double>{0.2, 0.1});
  return v;
}

CellMeta Meta(int reward, int length, bool terminal = false) {
  CellMeta m;
  m.actions.assign(static_cast<std::size_t>(length), Tokens{"look"});
  m.rewards.assign(static_cast<std::size_t>(length), 0);
  if (length > 0) m.rewards[0] = reward;
  m.cumulative_reward = reward;
  m.terminal = terminal;
  return m;
}

CellKey Key(int id, int reward = 0) { return CellKey{{id}, reward}; }

// Route of `actions` from reset, in archive form.
CellMeta RouteMeta(TextGame& game, const std::vector<Tokens>& actions) {
  CellMeta m;
  m.observation_hashes.push_back(game.Reset().Hash());
  for (const Tokens& a : actions) {
    const auto outcome = game.Step(a);
    m.actions.push_back(a);
    m.rewards.push_back(outcome.reward);
    m.cumulative_reward += outcome.reward;
    m.observation_hashes.push_back(game.observation().Hash());
  }
  m.terminal = game.state().done;
  m.won = game.state().won;
  return m;
}

}  // namespace

TEST_CASE("cell keys") {
  const WordVectors v = TwoDimVectors();
  SUBCASE("empty description") {
    const CellKey key = ComputeCellKey({}, 0, v, 1.0);
    CHECK(key.bins == std::vector<int>{0, 0});
    CHECK(key.reward == 0);
  }
  SUBCASE("reward separates otherwise equal cells") {
    const CellKey a = ComputeCellKey({"red"}, 0, v, 1.0);
    const CellKey b = ComputeCellKey({"red"}, 1, v, 1.0);
    CHECK(a != b);
    CHECK(a.bins == b.bins);
  }
  SUBCASE("order invariant") {
    CHECK(ComputeCellKey({"red", "apple"}, 2, v, 1.0) ==
          ComputeCellKey({"apple", "red"}, 2, v, 1.0));
  }
  SUBCASE("binning rounds half away from zero") {
    // sum = (2.6, -7.5)
    CHECK(ComputeCellKey({"red", "apple"}, 0, v, 1.0).bins == std::vector<int>{3, -8});
    // sum / 5 = (0.52, -1.5)
    CHECK(ComputeCellKey({"red", "apple"}, 0, v, 5.0).bins == std::vector<int>{1, -2});
  }
  SUBCASE("unknown tokens contribute nothing") {
    CHECK(ComputeCellKey({"red", "zebra"}, 0, v, 1.0) == ComputeCellKey({"red"}, 0, v, 1.0));
  }
  CHECK_THROWS(ComputeCellKey({}, 0, v, 0.0));
}

TEST_CASE("archive replacement") {
  Archive archive;
  CHECK(archive.Update(Key(1), Meta(2, 10)) == Archive::UpdateResult::kInserted);
  CHECK(archive.Update(Key(1), Meta(2, 12)) == Archive::UpdateResult::kKept);
  CHECK(archive.Update(Key(1), Meta(2, 10)) == Archive::UpdateResult::kKept);
  CHECK(archive.Update(Key(1), Meta(3, 15)) == Archive::UpdateResult::kReplaced);
  CHECK(archive.Find(Key(1))->length() == 15);
  CHECK(archive.Update(Key(1), Meta(3, 14)) == Archive::UpdateResult::kReplaced);
  CHECK(archive.Update(Key(1), Meta(1, 1)) == Archive::UpdateResult::kKept);

  SUBCASE("visits survive replacement") {
    archive.SelectWithDraw(0.0);
    archive.SelectWithDraw(0.0);
    CHECK(archive.Find(Key(1))->visits == 2);
    archive.Update(Key(1), Meta(3, 4));
    CHECK(archive.Find(Key(1))->visits == 2);
    CHECK(archive.Find(Key(1))->length() == 4);
  }
  SUBCASE("best route") {
    archive.Update(Key(2), Meta(3, 9));
    CHECK(*archive.best_key() == Key(2));
    archive.Update(Key(3), Meta(3, 9));
    CHECK(*archive.best_key() == Key(2));
    archive.Update(Key(4), Meta(4, 40));
    CHECK(*archive.best_key() == Key(4));
  }
}

TEST_CASE("cell selection") {
  SUBCASE("single cell") {
    Archive archive;
    archive.Update(Key(7), Meta(0, 0));
    SplitMix64 rng(1);
    CHECK(archive.Select(rng) == Key(7));
    CHECK(archive.Find(Key(7))->visits == 1);
  }
  SUBCASE("cumulative weight crossing") {
    // Weights 1 and 4, total 5: a draw of 0.5 lands at 2.5, past the first cell.
    Archive archive;
    archive.Update(Key(1), Meta(0, 1));
    archive.Update(Key(2), Meta(3, 1));
    CHECK(archive.SelectWithDraw(0.5) == Key(2));
    Archive again;
    again.Update(Key(1), Meta(0, 1));
    again.Update(Key(2), Meta(3, 1));
    CHECK(again.SelectWithDraw(0.1) == Key(1));
  }
  SUBCASE("visit discount") {
    CellMeta fresh = Meta(2, 1);
    CellMeta visited = Meta(2, 1);
    visited.visits = 8;
    CHECK(Archive::Weight(fresh) / Archive::Weight(visited) == doctest::Approx(3.0));
  }
  SUBCASE("terminal cells are never chosen") {
    Archive archive;
    archive.Update(Key(1), Meta(5, 1, true));
    CHECK_THROWS_AS(archive.SelectWithDraw(0.3), EmptyArchive);
    archive.Update(Key(2), Meta(0, 1));
    SplitMix64 rng(3);
    for (int i = 0; i < 50; ++i) CHECK(archive.Select(rng) == Key(2));
  }
  SUBCASE("empty") {
    Archive archive;
    SplitMix64 rng(1);
    CHECK_THROWS_AS(archive.Select(rng), EmptyArchive);
  }
  SUBCASE("empirical frequencies follow the weights") {
    Archive archive;
    archive.Update(Key(1), Meta(0, 1));
    archive.Update(Key(2), Meta(3, 1));
    // Visits change the weights, so compare against a shadow computation.
    SplitMix64 rng(42);
    SplitMix64 shadow(42);
    int visits[2] = {0, 0};
    for (int i = 0; i < 200; ++i) {
      const double w0 = 1.0 / std::sqrt(1.0 + visits[0]);
      const double w1 = 4.0 / std::sqrt(1.0 + visits[1]);
      const int expected = shadow.Uniform() * (w0 + w1) < w0 ? 0 : 1;
      const CellKey& got = archive.Select(rng);
      CHECK(got == Key(expected + 1));
      ++visits[expected];
    }
  }
}

TEST_CASE("archive agrees with a brute-force reference") {
  struct Ref {
    int reward;
    std::size_t length;
    int visits;
  };
  Archive archive;
  std::map<int, Ref> reference;
  std::vector<int> order;
  SplitMix64 rng(7);
  for (int op = 0; op < 10000; ++op) {
    if (rng.Below(5) == 0 && !archive.empty()) {
      const double u = rng.Uniform();
      // Reference selection by explicit cumulative sum.
      double total = 0;
      for (int id : order) {
        const Ref& r = reference[id];
        total += (1.0 + r.reward) / std::sqrt(1.0 + r.visits);
      }
      double running = 0;
      int pick = order.back();
      for (int id : order) {
        const Ref& r = reference[id];
        running += (1.0 + r.reward) / std::sqrt(1.0 + r.visits);
        if (u * total < running) {
          pick = id;
          break;
        }
      }
      CHECK(archive.SelectWithDraw(u) == Key(pick));
      ++reference[pick].visits;
      continue;
    }
    const int id = static_cast<int>(rng.Below(60));
    const int reward = static_cast<int>(rng.Below(4));
    const int length = static_cast<int>(rng.Below(20));
    const Archive::UpdateResult got = archive.Update(Key(id), Meta(reward, length));
    auto it = reference.find(id);
    Archive::UpdateResult expected;
    if (it == reference.end()) {
      reference[id] = {reward, static_cast<std::size_t>(length), 0};
      order.push_back(id);
      expected = Archive::UpdateResult::kInserted;
    } else if (reward > it->second.reward ||
               (reward == it->second.reward && static_cast<std::size_t>(length) < it->second.length)) {
      it->second.reward = reward;
      it->second.length = static_cast<std::size_t>(length);
      expected = Archive::UpdateResult::kReplaced;
    } else {
      expected = Archive::UpdateResult::kKept;
    }
    REQUIRE(got == expected);

    int best_reward = -1;
    std::size_t best_length = 0;
    for (int k : order) {
      const Ref& r = reference[k];
      if (r.reward > best_reward || (r.reward == best_reward && r.length < best_length)) {
        best_reward = r.reward;
        best_length = r.length;
      }
    }
    REQUIRE(archive.best()->cumulative_reward == best_reward);
    REQUIRE(archive.best()->length() == best_length);
  }
  for (const auto& [id, r] : reference) {
    const CellMeta* m = archive.Find(Key(id));
    REQUIRE(m != nullptr);
    CHECK(m->cumulative_reward == r.reward);
    CHECK(m->length() == r.length);
    CHECK(m->visits == r.visits);
  }
  CHECK(archive.size() == reference.size());
}

TEST_CASE("explore from a cell") {
  auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(1, 7));
  const WordVectors emb = DefaultCellEmbeddings(*spec, 16, 0);
  TextGame game(spec);
  SplitMix64 rng(5);

  SUBCASE("empty route, one step") {
    const CellMeta root = RouteMeta(game, {});
    const std::int64_t start = game.frames();
    const ExploreResult r = ExploreFrom(game, root, 1, rng, emb, 5.0, 1000);
    CHECK(r.frames == 1);
    CHECK(r.discovered.size() == 1);
    CHECK(game.frames() - start == 1);
  }
  SUBCASE("restore frames are counted") {
    const CellMeta route = RouteMeta(game, std::vector<Tokens>(10, Tokens{"look"}));
    for (int trial = 0; trial < 20; ++trial) {
      const std::int64_t start = game.frames();
      const ExploreResult r = ExploreFrom(game, route, 30, rng, emb, 5.0, 1000);
      CHECK(r.frames == 10 + static_cast<std::int64_t>(r.discovered.size()));
      CHECK(game.frames() - start == r.frames);
      if (r.discovered.size() < 30) CHECK(r.discovered.back().second.won);
      for (const auto& [key, meta] : r.discovered) {
        CHECK(meta.Consistent());
        CHECK((key.reward == 0 || key.reward == 1));
        CHECK(meta.length() > 10);
      }
    }
  }
  SUBCASE("frame limit") {
    const CellMeta route = RouteMeta(game, std::vector<Tokens>(10, Tokens{"look"}));
    CHECK(ExploreFrom(game, route, 30, rng, emb, 5.0, 10).frames == 0);
    const ExploreResult r = ExploreFrom(game, route, 30, rng, emb, 5.0, 12);
    CHECK(r.frames <= 12);
  }
  SUBCASE("tampered route diverges") {
    CellMeta route = RouteMeta(game, {Tokens{"look"}, Tokens{"look"}});
    route.observation_hashes[2] ^= 1;
    CHECK_THROWS_AS(ExploreFrom(game, route, 3, rng, emb, 5.0, 100), ReplayDivergence);
    CellMeta reward_tamper = RouteMeta(game, {Tokens{"look"}});
    reward_tamper.rewards[0] = 1;
    CHECK_THROWS_AS(ExploreFrom(game, reward_tamper, 3, rng, emb, 5.0, 100), ReplayDivergence);
  }
  SUBCASE("terminal cell") {
    const CellMeta won = RouteMeta(game, {Tokens{"take", "coin"}});
    CHECK(won.terminal);
    CHECK(ExploreFrom(game, won, 3, rng, emb, 5.0, 100).frames == 0);
  }
}

TEST_CASE("phase 1 on coin games") {
  SUBCASE("no budget") {
    auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(3, 1));
    const Phase1Result r = RunPhase1(spec, 0, {}, 1);
    CHECK(r.best.empty());
    CHECK(r.best.CumulativeReward() == 0);
    CHECK(r.stats.frames_used == 0);
  }
  SUBCASE("level 5 within 20000 frames") {
    auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(5, 7));
    const Phase1Result r = RunPhase1(spec, 20000, {}, 7);
    CHECK(r.best.size() == 5);
    CHECK(r.best.CumulativeReward() == 1);
    CHECK(r.stats.frames_used <= 20000);
    CHECK(r.stats.frames_used == r.stats.engine_frames);
    CHECK(r.stats.frames_to_first_win > 0);
    VerifyTrajectory(spec, r.best);
  }
  SUBCASE("converges to the shortest route") {
    for (int level = 2; level <= 10; ++level) {
      auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(level, 100 + level));
      const Phase1Result r = RunPhase1(spec, 200000, {}, 3);
      CAPTURE(level);
      CHECK(static_cast<int>(r.best.size()) == BfsShortestWin(*spec));
      CHECK(r.stats.frames_used == r.stats.engine_frames);
    }
  }
  SUBCASE("monotone progress and determinism") {
    auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(8, 4));
    const Phase1Result a = RunPhase1(spec, 30000, {}, 11);
    const Phase1Result b = RunPhase1(spec, 30000, {}, 11);
    CHECK(a.best == b.best);
    CHECK(ArchiveStatsToJson(a.stats) == ArchiveStatsToJson(b.stats));
    for (std::size_t i = 1; i < a.stats.progress.size(); ++i) {
      const ProgressPoint& p = a.stats.progress[i - 1];
      const ProgressPoint& q = a.stats.progress[i];
      CHECK(q.frames >= p.frames);
      CHECK((q.reward > p.reward || (q.reward == p.reward && q.length < p.length)));
    }
  }
}

TEST_CASE("phase 1 on cooking games") {
  SUBCASE("minimal game") {
    auto spec = std::make_shared<const GameSpec>(
        GenerateCookingGame({1, 0, false, false, false, false, 1}, 3));
    const Phase1Result r = RunPhase1(spec, 5000, {}, 1);
    CHECK(static_cast<int>(r.best.size()) >= BfsShortestWin(*spec));
    CHECK(r.stats.frames_to_first_win > 0);
    CHECK(r.best.CumulativeReward() == spec->max_score);
  }
  SUBCASE("multi-room game") {
    auto spec = std::make_shared<const GameSpec>(
        GenerateCookingGame({2, 1, true, true, false, false, 6}, 9));
    const Phase1Result r = RunPhase1(spec, 100000, {}, 1);
    CHECK(r.best.CumulativeReward() == spec->max_score);
    CHECK(r.stats.frames_used == r.stats.engine_frames);
    VerifyTrajectory(spec, r.best);
  }
}

TEST_CASE("random rollouts") {
  auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(2, 3));
  const RolloutResult a = RandomRollouts(spec, 10000, 1);
  CHECK(a.won());
  CHECK(a.frames_used == a.frames_to_first_win);
  CHECK(a.win_length >= 2);
  const RolloutResult b = RandomRollouts(spec, 10000, 1);
  CHECK(a.frames_to_first_win == b.frames_to_first_win);
  const RolloutResult capped = RandomRollouts(std::make_shared<const GameSpec>(GenerateCoinGame(15, 1)),
                                              500, 1);
  CHECK(capped.frames_used == 500);
  CHECK_FALSE(capped.won());
}

TEST_CASE("trajectory json lines") {
  auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(3, 2));
  const Phase1Result r = RunPhase1(spec, 10000, {}, 2);
  TrajectoryFile file{r.best, spec->max_score, 2};
  std::stringstream buffer;
  WriteTrajectoryJsonl(buffer, file);
  const std::string text = buffer.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == static_cast<long>(r.best.size() + 1));
  const TrajectoryFile back = ReadTrajectoryJsonl(buffer);
  CHECK(back.trajectory == r.best);
  CHECK(back.max_score == 1);
  CHECK(back.seed == 2);
  std::stringstream bad("{\"game_id\": 3}\n");
  CHECK_THROWS_AS(ReadTrajectoryJsonl(bad), TrajectoryFormatError);
}

TEST_CASE("state-cycle pruning") {
  auto spec = std::make_shared<const GameSpec>(GenerateCoinGame(3, 2));
  const std::vector<Tokens> shortest = BfsWinningActions(*spec);
  REQUIRE(shortest.size() == 3);
  std::vector<Tokens> actions;
  actions.push_back({"look"});
  actions.push_back({"look"});
  for (const Tokens& a : shortest) {
    actions.push_back(a);
    if (a[0] == "go") {
      // Step back and forth once.
      const std::map<std::string, std::string> back = {
          {"north", "south"}, {"south", "north"}, {"east", "west"}, {"west", "east"}};
      actions.push_back({"go", back.at(a[1])});
      actions.push_back(a);
    }
  }
  const Trajectory noisy = ReplayActions(spec, actions);
  REQUIRE(noisy.CumulativeReward() == 1);
  const Trajectory pruned = PruneStateCycles(spec, noisy);
  CHECK(pruned.Actions() == shortest);
  CHECK(pruned.CumulativeReward() == 1);
  CHECK_NOTHROW(VerifyTrajectory(spec, pruned));
  CHECK(PruneStateCycles(spec, pruned) == pruned);
}

TEST_CASE("glove loader") {
  const auto path = std::filesystem::temp_directory_path() / "gotext_glove_test.txt";
  {
    std::ofstream out(path);
    out << "red 0.5 -1.25 2\napple 1e-1 0 3\nred 9 9 9\n";
  }
  const WordVectors v = WordVectors::LoadGlove(path);
  CHECK(v.dim() == 3);
  CHECK(v.size() == 2);
  CHECK(v.Find("red")[1] == -1.25);
  CHECK(v.Find("apple")[0] == doctest::Approx(0.1));
  CHECK(v.Find("pear") == nullptr);
  CHECK_THROWS_AS(WordVectors::LoadGlove(path, 4), EmbeddingFileError);
  {
    std::ofstream out(path);
    out << "red 0.5 x\n";
  }
  CHECK_THROWS_AS(WordVectors::LoadGlove(path), EmbeddingFileError);
  std::filesystem::remove(path);
  CHECK(WordVectors::SeededRow("red", 4, 1) == WordVectors::SeededRow("red", 4, 1));
  CHECK(WordVectors::SeededRow("red", 4, 1) != WordVectors::SeededRow("red", 4, 2));
}

}  // namespace gotext

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

#include "gotext/harness/corpus.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include "gotext/engine/generator.h"
#include "gotext/engine/rng.h"

namespace gotext::harness {

namespace fs = std::filesystem;
using nlohmann::json;

std::string_view ScaleName(Scale scale) { return scale == Scale::kDesk ? "desk" : "full"; }

std::optional<Scale> ParseScale(std::string_view name) {
  if (name == "desk") return Scale::kDesk;
  if (name == "full") return Scale::kFull;
  return std::nullopt;
}

std::vector<SkillConfig> DeskLevels() {
  // {recipe, take, open, cook, cut, drop, go}
  return {
      {1, 0, false, false, false, false, 1},  {1, 1, false, false, false, false, 1},
      {1, 1, false, false, false, false, 6},  {1, 1, true, false, false, false, 6},
      {1, 0, false, true, false, false, 1},   {1, 0, false, false, true, false, 1},
      {1, 1, false, false, false, true, 1},   {2, 1, false, false, false, false, 6},
      {2, 2, false, false, false, false, 9},  {2, 2, true, false, false, false, 9},
      {2, 1, false, true, true, false, 6},    {2, 2, false, true, false, true, 6},
      {2, 0, false, false, true, true, 1},    {3, 1, false, false, false, false, 9},
      {3, 2, true, true, false, false, 9},    {3, 3, false, false, true, false, 12},
      {3, 2, false, true, true, true, 12},    {3, 3, true, true, true, false, 12},
      {1, 1, true, true, true, true, 12},     {3, 3, true, true, true, true, 12},
  };
}

std::vector<SkillConfig> FullLevels() {
  std::vector<SkillConfig> all;
  for (int recipe = 1; recipe <= 3; ++recipe) {
    for (int take = 0; take <= recipe; ++take) {
      for (int flags = 0; flags < 16; ++flags) {
        for (int go : {1, 6, 9, 12}) {
          all.push_back({recipe, take, (flags & 1) != 0, (flags & 2) != 0, (flags & 4) != 0,
                         (flags & 8) != 0, go});
        }
      }
    }
  }
  SplitMix64 rng(Fnv1a64("gotext-full-levels"));
  std::vector<std::size_t> order(all.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.Shuffle(order);
  order.resize(kFullLevelCount);
  std::sort(order.begin(), order.end());
  std::vector<SkillConfig> out;
  for (std::size_t i : order) out.push_back(all[i]);
  return out;
}

int DifficultyRank(const SkillConfig& s) {
  return s.recipe + s.take + s.open + s.cook + s.cut + s.drop + (s.go == 1 ? 0 : s.go / 3);
}

const CorpusEntry* CorpusManifest::Find(const std::string& game_id) const {
  for (const CorpusEntry& e : games) {
    if (e.game_id == game_id) return &e;
  }
  return nullptr;
}

json ManifestToJson(const CorpusManifest& m) {
  json games = json::array();
  for (const CorpusEntry& e : m.games) {
    games.push_back({{"game_id", e.game_id},
                     {"family", e.family == Family::kCoin ? "coin" : "cooking"},
                     {"label", e.label},
                     {"spec_path", e.spec_path},
                     {"seed", e.seed}});
  }
  return {{"scale", m.scale}, {"seed", m.seed}, {"games", games}};
}

CorpusManifest ManifestFromJson(const json& j) {
  CorpusManifest m;
  try {
    m.scale = j.at("scale").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const json& g : j.at("games")) {
      CorpusEntry e;
      e.game_id = g.at("game_id").get<std::string>();
      e.family = g.at("family").get<std::string>() == "coin" ? Family::kCoin : Family::kCooking;
      e.label = g.at("label").get<std::string>();
      e.spec_path = g.at("spec_path").get<std::string>();
      e.seed = g.at("seed").get<std::uint64_t>();
      m.games.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw CorpusError(std::string("malformed corpus manifest: ") + e.what());
  }
  return m;
}

Corpus BuildCorpus(const CorpusOptions& options) {
  const bool desk = options.scale == Scale::kDesk;
  const std::vector<SkillConfig> levels =
      !options.levels.empty() ? options.levels : (desk ? DeskLevels() : FullLevels());
  const int per_level = options.games_per_level > 0
                            ? options.games_per_level
                            : (desk ? kDeskGamesPerLevel : kFullGamesPerLevel);
  Corpus corpus;
  corpus.manifest.scale = std::string(ScaleName(options.scale));
  corpus.manifest.seed = options.seed;
  for (const SkillConfig& skills : levels) {
    for (int g = 0; g < per_level; ++g) {
      const std::uint64_t seed = 1000 * options.seed + static_cast<std::uint64_t>(g);
      auto spec = std::make_shared<const GameSpec>(GenerateCookingGame(skills, seed));
      if (corpus.manifest.Find(spec->game_id) != nullptr) {
        throw CorpusError("duplicate game id " + spec->game_id);
      }
      corpus.manifest.games.push_back(
          {spec->game_id, Family::kCooking, skills.Label(), spec->game_id + ".json", seed});
      corpus.specs.push_back(std::move(spec));
    }
  }
  return corpus;
}

void SaveCorpus(const Corpus& corpus, const fs::path& dir) {
  fs::create_directories(dir);
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    SaveSpec(*corpus.specs[i], (dir / corpus.manifest.games[i].spec_path).string());
  }
  std::ofstream out(dir / kManifestFile, std::ios::binary);
  if (!out) throw CorpusError("cannot write " + (dir / kManifestFile).string());
  out << ManifestToJson(corpus.manifest).dump(2) << "\n";
}

Corpus LoadCorpus(const fs::path& dir) {
  std::ifstream in(dir / kManifestFile, std::ios::binary);
  if (!in) throw CorpusError("missing corpus manifest " + (dir / kManifestFile).string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw CorpusError(std::string("malformed corpus manifest: ") + e.what());
  }
  Corpus corpus;
  corpus.manifest = ManifestFromJson(j);
  std::map<std::string, int> seen;
  for (const CorpusEntry& e : corpus.manifest.games) {
    if (seen[e.game_id]++ > 0) throw CorpusError("duplicate game id " + e.game_id);
    const fs::path path = dir / e.spec_path;
    if (!fs::exists(path)) throw CorpusError("missing spec file " + path.string());
    GameSpec spec;
    try {
      spec = LoadSpec(path.string());
      ValidateSpec(spec);
    } catch (const SpecError& err) {
      throw CorpusError(path.string() + ": " + err.what());
    }
    if (spec.game_id != e.game_id) {
      throw CorpusError(path.string() + ": game id " + spec.game_id + " != " + e.game_id);
    }
    corpus.specs.push_back(std::make_shared<const GameSpec>(std::move(spec)));
  }
  return corpus;
}

json SplitToJson(const CorpusSplit& s) {
  return {{"train", s.train}, {"validation", s.validation}, {"test", s.test},
          {"small_labels", s.small_labels}};
}

CorpusSplit SplitFromJson(const json& j) {
  CorpusSplit s;
  s.train = j.at("train").get<std::vector<std::string>>();
  s.validation = j.at("validation").get<std::vector<std::string>>();
  s.test = j.at("test").get<std::vector<std::string>>();
  s.small_labels = j.value("small_labels", std::vector<std::string>{});
  return s;
}

CorpusSplit SplitCorpus(const CorpusManifest& manifest, const SplitRatios& ratios,
                        std::uint64_t seed, bool strict) {
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 ||
      std::abs(ratios.train + ratios.validation + ratios.test - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must be non-negative and sum to 1");
  }
  std::vector<std::string> label_order;
  std::map<std::string, std::vector<std::size_t>> by_label;
  for (std::size_t i = 0; i < manifest.games.size(); ++i) {
    const std::string& label = manifest.games[i].label;
    if (!by_label.contains(label)) label_order.push_back(label);
    by_label[label].push_back(i);
  }
  const int slots = (ratios.train > 0) + (ratios.validation > 0) + (ratios.test > 0);
  enum Part { kTrain, kVal, kTest };
  std::vector<Part> part(manifest.games.size(), kTrain);
  CorpusSplit split;
  for (const std::string& label : label_order) {
    std::vector<std::size_t> members = by_label[label];
    SplitMix64 rng(DeriveSeed(seed, label));
    rng.Shuffle(members);
    const int n = static_cast<int>(members.size());
    int n_test = static_cast<int>(std::lround(n * ratios.test));
    int n_val = static_cast<int>(std::lround(n * ratios.validation));
    if (n < slots) {
      if (strict) throw LabelTooSmall(label + " has " + std::to_string(n) + " games");
      split.small_labels.push_back(label);
      n_test = ratios.test > 0 ? std::min(n, 1) : 0;
      n_val = ratios.validation > 0 ? std::min(n - n_test, 1) : 0;
    } else {
      if (ratios.test > 0) n_test = std::max(n_test, 1);
      if (ratios.validation > 0) n_val = std::max(n_val, 1);
      if (ratios.train > 0) {
        while (n_test + n_val > n - 1) (n_val > 1 ? n_val : n_test)--;
      }
    }
    for (int k = 0; k < n; ++k) {
      part[members[k]] = k < n_test ? kTest : (k < n_test + n_val ? kVal : kTrain);
    }
  }
  for (std::size_t i = 0; i < part.size(); ++i) {
    const std::string& id = manifest.games[i].game_id;
    (part[i] == kTrain ? split.train : part[i] == kVal ? split.validation : split.test)
        .push_back(id);
  }
  return split;
}

}  // namespace gotext::harness

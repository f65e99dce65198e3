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

#ifndef GOTEXT_HARNESS_CORPUS_H_
#define GOTEXT_HARNESS_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gotext/engine/game_spec.h"
#include "json.hpp"

namespace gotext::harness {

enum class Scale { kDesk, kFull };

std::string_view ScaleName(Scale scale);
std::optional<Scale> ParseScale(std::string_view name);

inline constexpr int kDeskGamesPerLevel = 3;
inline constexpr int kFullGamesPerLevel = 20;
inline constexpr int kFullLevelCount = 222;

// Twenty labels that vary every skill axis.
std::vector<SkillConfig> DeskLevels();
// 222 distinct valid skill configurations, fixed independently of any seed.
std::vector<SkillConfig> FullLevels();

// Rough difficulty used to order breakdown rows: skills exercised plus rooms.
int DifficultyRank(const SkillConfig& skills);

struct CorpusEntry {
  std::string game_id;
  Family family = Family::kCooking;
  std::string label;
  // Relative to the corpus directory.
  std::string spec_path;
  std::uint64_t seed = 0;

  bool operator==(const CorpusEntry&) const = default;
};

struct CorpusManifest {
  std::string scale;
  std::uint64_t seed = 0;
  std::vector<CorpusEntry> games;

  bool operator==(const CorpusManifest&) const = default;
  const CorpusEntry* Find(const std::string& game_id) const;
};

nlohmann::json ManifestToJson(const CorpusManifest& manifest);
CorpusManifest ManifestFromJson(const nlohmann::json& j);

class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusOptions {
  Scale scale = Scale::kDesk;
  std::uint64_t seed = 1;
  // 0 selects the scale default.
  int games_per_level = 0;
  // Empty selects the scale default.
  std::vector<SkillConfig> levels;
};

struct Corpus {
  CorpusManifest manifest;
  // Parallel to manifest.games.
  std::vector<std::shared_ptr<const GameSpec>> specs;

  std::size_t size() const { return specs.size(); }
};

// Game g of each level is generated with rng seed 1000 * seed + g.
Corpus BuildCorpus(const CorpusOptions& options);

inline constexpr const char* kManifestFile = "manifest.json";

// Writes <game_id>.json for every game plus manifest.json.
void SaveCorpus(const Corpus& corpus, const std::filesystem::path& dir);
// Throws CorpusError on a missing, invalid or mismatching spec file.
Corpus LoadCorpus(const std::filesystem::path& dir);

struct SplitRatios {
  double train = 0.8;
  double validation = 0.1;
  double test = 0.1;
};

class LabelTooSmall : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CorpusSplit {
  std::vector<std::string> train;
  std::vector<std::string> validation;
  std::vector<std::string> test;
  // Labels with fewer games than splits; filled test first, then validation.
  std::vector<std::string> small_labels;
};

nlohmann::json SplitToJson(const CorpusSplit& split);
CorpusSplit SplitFromJson(const nlohmann::json& j);

// Stratified by label: each label gets round(n * ratio) validation and test
// games, at least one each when it has three or more games, and the rest go
// to training. Lists keep manifest order. With `strict`, a label smaller than
// the number of splits throws LabelTooSmall instead of being resolved.
CorpusSplit SplitCorpus(const CorpusManifest& manifest, const SplitRatios& ratios,
                        std::uint64_t seed, bool strict = false);

}  // namespace gotext::harness

#endif  // GOTEXT_HARNESS_CORPUS_H_

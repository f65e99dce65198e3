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

#ifndef GOTEXT_EXPLORE_ARCHIVE_H_
#define GOTEXT_EXPLORE_ARCHIVE_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "gotext/engine/rng.h"
#include "gotext/engine/text.h"
#include "gotext/nn/word_vectors.h"

namespace gotext {

struct CellKey {
  std::vector<int> bins;
  int reward = 0;

  auto operator<=>(const CellKey&) const = default;
  bool operator==(const CellKey&) const = default;
};

struct CellKeyHash {
  std::size_t operator()(const CellKey& key) const;
};

// bins[i] = round(sum of token vectors / bin_width); tokens missing from
// `embeddings` contribute nothing.
CellKey ComputeCellKey(const Tokens& description, int cumulative_reward,
                       const WordVectors& embeddings, double bin_width);

// Compact route to a cell: the action list plus per-step rewards and the
// observation hash before each action and after the last one. The full
// observations are recovered by replay.
struct CellMeta {
  std::vector<Tokens> actions;
  std::vector<int> rewards;
  std::vector<std::uint64_t> observation_hashes;
  int cumulative_reward = 0;
  int visits = 0;
  // The game had ended on arrival; such cells cannot be explored from.
  bool terminal = false;
  bool won = false;

  std::size_t length() const { return actions.size(); }
  bool Consistent() const;
};

class EmptyArchive : public std::logic_error {
 public:
  EmptyArchive() : std::logic_error("no selectable cell in archive") {}
};

class Archive {
 public:
  enum class UpdateResult { kInserted, kReplaced, kKept };

  // `reward_power` p generalizes the selection weight to
  // (1 + reward)^p / sqrt(1 + visits).
  explicit Archive(double reward_power = 1.0) : reward_power_(reward_power) {}

  // Inserts an unseen cell; replaces an existing one iff the candidate has a
  // higher reward, or the same reward and a strictly shorter route. Visits
  // survive replacement.
  UpdateResult Update(const CellKey& key, CellMeta candidate);

  // Weighted draw with w = (1 + reward) / sqrt(1 + visits) over non-terminal
  // cells in insertion order; increments the chosen cell's visits.
  const CellKey& Select(SplitMix64& rng);
  const CellKey& SelectWithDraw(double u);
  static double Weight(const CellMeta& meta, double reward_power = 1.0);

  const CellMeta* Find(const CellKey& key) const;
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  const std::vector<CellKey>& keys() const { return keys_; }

  // Best route in the archive: highest reward, then shortest, then earliest.
  const CellMeta* best() const { return best_ ? &cells_[*best_] : nullptr; }
  const CellKey* best_key() const { return best_ ? &keys_[*best_] : nullptr; }

  std::int64_t frames_used() const { return frames_used_; }
  void AddFrames(std::int64_t frames) { frames_used_ += frames; }

 private:
  static bool Better(const CellMeta& a, const CellMeta& b);

  std::vector<CellKey> keys_;
  std::vector<CellMeta> cells_;
  std::unordered_map<CellKey, std::size_t, CellKeyHash> index_;
  std::optional<std::size_t> best_;
  std::int64_t frames_used_ = 0;
  double reward_power_ = 1.0;
};

}  // namespace gotext

#endif  // GOTEXT_EXPLORE_ARCHIVE_H_

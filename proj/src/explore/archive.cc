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

#include "gotext/explore/archive.h"

#include <cmath>

namespace gotext {

std::size_t CellKeyHash::operator()(const CellKey& key) const {
  std::uint64_t h = static_cast<std::uint64_t>(key.reward) * 0x9e3779b97f4a7c15ULL;
  for (int b : key.bins) {
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(b)) + 0x9e3779b97f4a7c15ULL +
         (h << 6) + (h >> 2);
  }
  return static_cast<std::size_t>(h);
}

CellKey ComputeCellKey(const Tokens& description, int cumulative_reward,
                       const WordVectors& embeddings, double bin_width) {
  if (!(bin_width > 0)) throw std::invalid_argument("bin width must be positive");
  const int dim = embeddings.dim();
  std::vector<double> sum(static_cast<std::size_t>(dim), 0.0);
  for (const std::string& token : description) {
    const double* row = embeddings.Find(token);
    if (row == nullptr) continue;
    for (int i = 0; i < dim; ++i) sum[i] += row[i];
  }
  CellKey key;
  key.reward = cumulative_reward;
  key.bins.resize(sum.size());
  for (std::size_t i = 0; i < sum.size(); ++i) {
    key.bins[i] = static_cast<int>(std::lround(sum[i] / bin_width));
  }
  return key;
}

bool CellMeta::Consistent() const {
  if (rewards.size() != actions.size()) return false;
  if (!observation_hashes.empty() && observation_hashes.size() != actions.size() + 1) return false;
  int total = 0;
  for (int r : rewards) total += r;
  return total == cumulative_reward && visits >= 0;
}

bool Archive::Better(const CellMeta& a, const CellMeta& b) {
  if (a.cumulative_reward != b.cumulative_reward) return a.cumulative_reward > b.cumulative_reward;
  return a.length() < b.length();
}

Archive::UpdateResult Archive::Update(const CellKey& key, CellMeta candidate) {
  const auto it = index_.find(key);
  std::size_t slot = 0;
  UpdateResult result;
  if (it == index_.end()) {
    slot = cells_.size();
    index_.emplace(key, slot);
    keys_.push_back(key);
    cells_.push_back(std::move(candidate));
    result = UpdateResult::kInserted;
  } else {
    slot = it->second;
    CellMeta& existing = cells_[slot];
    if (!Better(candidate, existing)) return UpdateResult::kKept;
    candidate.visits = existing.visits;
    existing = std::move(candidate);
    result = UpdateResult::kReplaced;
  }
  if (!best_ || Better(cells_[slot], cells_[*best_])) best_ = slot;
  return result;
}

double Archive::Weight(const CellMeta& meta, double reward_power) {
  if (meta.terminal) return 0.0;
  const double base = 1.0 + meta.cumulative_reward;
  const double lift = reward_power == 1.0 ? base : std::pow(base, reward_power);
  return lift / std::sqrt(1.0 + meta.visits);
}

const CellKey& Archive::Select(SplitMix64& rng) { return SelectWithDraw(rng.Uniform()); }

const CellKey& Archive::SelectWithDraw(double u) {
  double total = 0;
  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const double w = Weight(cells_[i], reward_power_);
    if (w > 0) {
      total += w;
      last = i;
    }
  }
  if (!last) throw EmptyArchive();
  const double target = u * total;
  double running = 0;
  std::size_t chosen = *last;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const double w = Weight(cells_[i], reward_power_);
    if (w <= 0) continue;
    running += w;
    if (target < running) {
      chosen = i;
      break;
    }
  }
  ++cells_[chosen].visits;
  return keys_[chosen];
}

const CellMeta* Archive::Find(const CellKey& key) const {
  const auto it = index_.find(key);
  return it == index_.end() ? nullptr : &cells_[it->second];
}

}  // namespace gotext

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

#include "gotext/nn/word_vectors.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "gotext/engine/rng.h"

namespace gotext {

WordVectors WordVectors::LoadGlove(const std::filesystem::path& path, int expected_dim) {
  std::ifstream in(path);
  if (!in) throw EmbeddingFileError("cannot open embedding file " + path.string());
  WordVectors table(expected_dim);
  std::string line;
  std::vector<double> row;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    row.clear();
    std::string number;
    while (fields >> number) {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(number.data(), number.data() + number.size(), v);
      if (ec != std::errc() || ptr != number.data() + number.size()) {
        throw EmbeddingFileError(path.string() + ":" + std::to_string(line_number) +
                                 ": bad number '" + number + "'");
      }
      row.push_back(v);
    }
    if (table.dim_ == 0) table.dim_ = static_cast<int>(row.size());
    if (static_cast<int>(row.size()) != table.dim_ || row.empty()) {
      throw EmbeddingFileError(path.string() + ":" + std::to_string(line_number) + ": expected " +
                               std::to_string(table.dim_) + " values, got " +
                               std::to_string(row.size()));
    }
    if (!table.Contains(token)) table.Set(token, row);
  }
  if (table.size() == 0) throw EmbeddingFileError("embedding file " + path.string() + " is empty");
  return table;
}

std::vector<double> WordVectors::SeededRow(std::string_view token, int dim, std::uint64_t seed) {
  SplitMix64 rng(DeriveSeed(seed, token));
  std::vector<double> row(static_cast<std::size_t>(dim));
  for (double& v : row) v = rng.Normal();
  return row;
}

const double* WordVectors::Find(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  if (it == index_.end()) return nullptr;
  return values_.data() + it->second * static_cast<std::size_t>(dim_);
}

void WordVectors::Set(std::string_view token, std::span<const double> values) {
  if (static_cast<int>(values.size()) != dim_) {
    throw std::invalid_argument("word vector width mismatch");
  }
  const auto it = index_.find(std::string(token));
  if (it != index_.end()) {
    std::copy(values.begin(), values.end(), values_.begin() + it->second * dim_);
    return;
  }
  index_.emplace(std::string(token), tokens_.size());
  tokens_.emplace_back(token);
  values_.insert(values_.end(), values.begin(), values.end());
}

bool WordVectors::AddSeeded(std::string_view token, std::uint64_t seed) {
  if (Contains(token)) return false;
  Set(token, SeededRow(token, dim_, seed));
  return true;
}

}  // namespace gotext

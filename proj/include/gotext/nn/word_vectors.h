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

#ifndef GOTEXT_NN_WORD_VECTORS_H_
#define GOTEXT_NN_WORD_VECTORS_H_

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gotext {

class EmbeddingFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Fixed token -> vector table. Rows are stored contiguously in insertion
// order.
class WordVectors {
 public:
  WordVectors() = default;
  explicit WordVectors(int dim) : dim_(dim) {}

  // Reads GloVe text ("token v1 ... vd" per line). `expected_dim` of 0 takes
  // the width of the first line.
  static WordVectors LoadGlove(const std::filesystem::path& path, int expected_dim = 0);

  // Standard-normal row determined by (seed, token) alone.
  static std::vector<double> SeededRow(std::string_view token, int dim, std::uint64_t seed);

  // Table holding a seeded row for every token.
  template <typename Range>
  static WordVectors Seeded(const Range& tokens, int dim, std::uint64_t seed) {
    WordVectors table(dim);
    for (const auto& token : tokens) table.AddSeeded(token, seed);
    return table;
  }

  int dim() const { return dim_; }
  std::size_t size() const { return tokens_.size(); }
  const std::vector<std::string>& tokens() const { return tokens_; }

  // nullptr when absent.
  const double* Find(std::string_view token) const;
  bool Contains(std::string_view token) const { return Find(token) != nullptr; }

  // Overwrites an existing row.
  void Set(std::string_view token, std::span<const double> values);
  // Adds a seeded row unless the token is present; returns true if added.
  bool AddSeeded(std::string_view token, std::uint64_t seed);

 private:
  int dim_ = 0;
  std::vector<std::string> tokens_;
  std::vector<double> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace gotext

#endif  // GOTEXT_NN_WORD_VECTORS_H_

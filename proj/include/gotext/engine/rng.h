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

#ifndef GOTEXT_ENGINE_RNG_H_
#define GOTEXT_ENGINE_RNG_H_

#include <cmath>
#include <cstdint>
#include <string_view>
#include <utility>
#include <vector>

namespace gotext {

// SplitMix64 (Steele, Lea & Flood 2014). Every random decision in the
// toolkit is drawn from this generator so that generated games, archives and
// training runs are reproducible across implementations. Derived quantities
// are defined bit-exactly:
//   Uniform()  = (Next() >> 11) * 2^-53                 in [0, 1)
//   Below(n)   = rejection sampling on Next() % n       in [0, n)
//   Normal()   = Box-Muller on two Uniform() draws, cosine branch only
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  std::uint64_t Next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double Uniform() { return static_cast<double>(Next() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  std::uint64_t Below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = Next();
      if (r >= threshold) return r % n;
    }
  }

  int BelowInt(int n) { return static_cast<int>(Below(static_cast<std::uint64_t>(n))); }

  double Normal() {
    double u1 = Uniform();
    const double u2 = Uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = Below(i);
      std::swap(items[i - 1], items[j]);
    }
  }

  template <typename T>
  const T& Choice(const std::vector<T>& items) {
    return items[Below(items.size())];
  }

  std::uint64_t state() const { return state_; }
  void set_state(std::uint64_t s) { state_ = s; }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return Next(); }

 private:
  std::uint64_t state_;
};

// 64-bit FNV-1a.
inline std::uint64_t Fnv1a64(std::string_view text,
                             std::uint64_t hash = 0xcbf29ce484222325ULL) {
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// Derives an independent stream seed from a parent seed and a salt.
inline std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t salt) {
  SplitMix64 mix(seed ^ (salt * 0x9e3779b97f4a7c15ULL));
  mix.Next();
  return mix.Next();
}

inline std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view salt) {
  return DeriveSeed(seed, Fnv1a64(salt));
}

}  // namespace gotext

#endif  // GOTEXT_ENGINE_RNG_H_

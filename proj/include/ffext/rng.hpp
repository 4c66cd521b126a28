// Copyright 2026 The ffext Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FFEXT_RNG_HPP_
#define FFEXT_RNG_HPP_

// Seeded randomness. The standard distributions are implementation-defined,
// so only the raw mt19937_64 stream is used and everything else is derived
// here; a seed reproduces the same draws on every toolchain.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <unordered_set>
#include <vector>

#include "ffext/characters.hpp"

namespace ffext {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    double u1;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  Complex complex_normal() { return {normal(), normal()}; }

  /// Derives an independent stream for a labelled sub-task.
  Rng fork(std::uint64_t label) {
    std::uint64_t z = engine_() + 0x9e3779b97f4a7c15ull * (label + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::mt19937_64 engine_;
};

/// k distinct indices from [0, n), in draw order.
inline std::vector<std::uint64_t> sample_distinct(Rng& rng, std::uint64_t n, std::uint64_t k) {
  if (k > n) k = n;
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  if (k * 4 >= n && n <= (std::uint64_t{1} << 26)) {
    std::vector<std::uint64_t> all(static_cast<std::size_t>(n));
    for (std::uint64_t i = 0; i < n; ++i) all[i] = i;
    for (std::uint64_t i = 0; i < k; ++i) {
      const std::uint64_t j = i + rng.below(n - i);
      std::swap(all[i], all[j]);
      out.push_back(all[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < k) {
    const std::uint64_t v = rng.below(n);
    if (seen.insert(v).second) out.push_back(v);
  }
  return out;
}

}  // namespace ffext

#endif  // FFEXT_RNG_HPP_

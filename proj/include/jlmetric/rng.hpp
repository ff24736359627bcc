// Copyright 2026 The jlmetric Authors.
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

#ifndef JLMETRIC_RNG_HPP_
#define JLMETRIC_RNG_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace jlm {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives an independent child seed from a parent seed and a key.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key) {
  return mix64(parent ^ mix64(key ^ 0x6a09e667f3bcc908ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::string_view tag) {
  return derive_seed(parent, fnv1a(tag));
}

/// Seedable 64-bit generator. Every draw consumes exactly one engine output
/// (except normal()), so callers can keep draw counts independent of
/// data-dependent branches.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, n); n must be positive.
  std::size_t below(std::size_t n) {
    auto k = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return k < n ? k : n - 1;
  }

  /// +1 or -1 with equal probability.
  double rademacher() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

  double normal() { return normal_(engine_); }

  Rng split(std::string_view tag) const {
    return Rng(derive_seed(seed_, tag));
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace jlm

#endif  // JLMETRIC_RNG_HPP_

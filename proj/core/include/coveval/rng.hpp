/*
 * Copyright 2026 The CovEval Toolkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>

namespace coveval {

// Frozen randomness contract: every randomized component draws from
// std::mt19937_64 (whose output sequence is fully specified by the C++
// standard, so identical seeds give identical streams on every platform)
// and converts to doubles with the 53-bit shift construction below.
// std::uniform_real_distribution is deliberately avoided: its draw
// algorithm is implementation-defined.

/// splitmix64 finalizer (Steele/Vigna constants); used to derive child
/// seeds so that per-scene / per-image streams are independent.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Deterministic child-seed derivation: same (master, salt) always yields
/// the same seed, and distinct salts decorrelate streams.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::uint64_t salt) noexcept {
  return mix64(master ^ mix64(salt + 1));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) built from the top 53 bits of one draw.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi). Always consumes exactly one draw, even
  /// when lo == hi, so downstream draw alignment never depends on
  /// parameter values.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform index in [0, n); n must be positive.
  std::size_t index(std::size_t n) {
    auto i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace coveval

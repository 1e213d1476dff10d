// Copyright 2026 The Spirel Authors
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

#ifndef SPIREL_RANDOM_HPP_
#define SPIREL_RANDOM_HPP_

#include <cstdint>
#include <random>

// Seeded randomness helpers. Every stochastic operation in the library takes
// an explicit generator; there is no hidden global state. The distribution
// helpers below are hand-rolled on top of the raw 64-bit stream so that a
// fixed seed produces the same draws on every platform and compiler.

namespace spirel {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; used to derive well-separated seeds for independent
// streams (one per simulated client, per experiment cell, ...).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream + 0x51ed2701a9e3cc01ULL));
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(derive_seed(seed, stream));
}

// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

inline bool bernoulli(Rng& rng, double p) {
  return uniform_unit(rng) < p;
}

// Uniform index in [0, n); n must be >= 1. Rejection keeps the draw exact.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = rng();
  while (x >= bound) x = rng();
  return static_cast<std::size_t>(x % n);
}

}  // namespace spirel

#endif  // SPIREL_RANDOM_HPP_

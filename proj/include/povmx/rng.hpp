// Copyright (c) the povmx developers.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace povmx {

/// SplitMix64 step. Used as a mixing function for deriving independent
/// substream seeds; the actual generator is std::mt19937_64, whose output
/// sequence is fully specified by the standard.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for substream `stream` of run seed `seed`. Stream splitting contract:
/// trajectory i always uses derive_seed(run_seed, i), independent of thread
/// count or evaluation order.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x517cc1b727220a95ULL));
}

inline std::mt19937_64 make_engine(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

/// Uniform double in [0,1) from the top 53 bits of the engine output.
/// Hand-rolled so the mapping is identical on every platform.
inline double uniform01(std::mt19937_64 &eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

/// Draw an index from unnormalized nonnegative weights with total mass
/// `total`. Walks the cumulative sum in index order; deterministic given the
/// engine state.
inline int categorical(std::mt19937_64 &eng, std::span<const double> weights,
                       double total) {
  const double u = uniform01(eng) * total;
  double acc = 0.0;
  int last_positive = -1;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) last_positive = static_cast<int>(i);
    acc += weights[i];
    if (u < acc) return static_cast<int>(i);
  }
  // u landed in the float dust past the last cumulative step.
  return last_positive >= 0 ? last_positive
                            : static_cast<int>(weights.size()) - 1;
}

} // namespace povmx

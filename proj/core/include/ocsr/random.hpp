// Copyright 2026 The ocsr Authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random helpers. std::mt19937 is bit-exact across platforms,
// but the std distributions are not, so every draw here goes through explicit
// integer arithmetic. All dataset generation, weight init and shuffling in the
// project must use this wrapper; byte-identical outputs for a fixed seed are a
// contract, not an accident.

#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ocsr {

/// SplitMix64 mix step; used to derive independent substream seeds.
inline uint64_t mix_seed(uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derive the seed of substream `stream` of a master seed.
inline uint64_t substream_seed(uint64_t master, uint64_t stream) {
  return mix_seed(master ^ mix_seed(stream));
}

class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(static_cast<uint32_t>(mix_seed(seed))) {}

  uint32_t next_u32() { return gen_(); }

  /// Uniform integer in [0, n), n >= 1. Rejection sampling, no modulo bias.
  uint32_t uniform_index(uint32_t n) {
    if (n <= 1) return 0;
    const uint32_t limit = UINT32_MAX - UINT32_MAX % n;
    uint32_t v;
    do {
      v = gen_();
    } while (v >= limit);
    return v % n;
  }

  int uniform_int(int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(uniform_index(static_cast<uint32_t>(hi - lo + 1)));
  }

  /// Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() {
    const uint64_t hi = gen_() >> 5;  // 27 bits
    const uint64_t lo = gen_() >> 6;  // 26 bits
    return (static_cast<double>(hi) * 67108864.0 + static_cast<double>(lo)) *
           (1.0 / 9007199254740992.0);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Standard normal via Box-Muller (pairs cached).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1, u2;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  /// Weighted index draw; weights must be non-negative with a positive sum.
  size_t weighted_index(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    double x = uniform() * total;
    for (size_t i = 0; i + 1 < weights.size(); ++i) {
      x -= weights[i];
      if (x < 0.0) return i;
    }
    return weights.empty() ? 0 : weights.size() - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = uniform_index(static_cast<uint32_t>(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace ocsr

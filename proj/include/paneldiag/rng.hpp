#pragma once

#include <cstdint>
#include <random>

#include "paneldiag/stats.hpp"

namespace paneldiag {

// SplitMix64 finalizer; mixes a 64-bit state into a well-distributed output.
inline std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream-splitting rule: replication i of a study seeded with `master` draws
// from mt19937_64 seeded with splitmix64(master + (i + 1) * GAMMA), the i-th
// output of a SplitMix64 sequence started at `master`. Substreams are
// independent for practical purposes and reproducible across platforms
// (mt19937_64 output is fixed by the standard).
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

// Seedable portable generator. Uniforms take the top 53 bits of mt19937_64
// output; normals invert the uniform through AS241, so the draw sequence is
// one variate per output word with no rejection steps.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform01() {
    const std::uint64_t x = gen_();
    return (static_cast<double>(x >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal(double mean = 0.0, double sd = 1.0) {
    return mean + sd * normal_quantile(uniform01());
  }

  // Uniform integer in [0, bound), bound >= 1. Rejection from the top
  // 32 bits keeps the sequence identical across platforms.
  std::uint32_t below(std::uint32_t bound) {
    const std::uint64_t span = 0x100000000ULL;
    const std::uint64_t limit = span - span % bound;
    for (;;) {
      const std::uint64_t x = gen_() >> 32;
      if (x < limit) return static_cast<std::uint32_t>(x % bound);
    }
  }

  // Fisher-Yates; std::shuffle is not used because its draws are
  // implementation-defined.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(static_cast<std::uint32_t>(i))]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace paneldiag

#pragma once

#include <cstdint>
#include <random>

namespace soda {

// Derives well-mixed 64-bit seeds from (seed, stream) pairs so that
// independent RNG streams can be split off a single experiment seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled sampling on top. The engine is bit-exact by
// standard, and avoiding std::uniform_*_distribution keeps draws identical
// across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix_seed(seed, stream)) {}

  std::uint64_t next_u64() { return engine_(); }

  // [0, 1) with 53 bits of precision
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // {0, ..., n-1}
  int uniform_int(int n) {
    int i = static_cast<int>(uniform() * n);
    return i >= n ? n - 1 : i;
  }

  double uniform_real(double lo, double hi) {
    return lo + (hi - lo) * uniform();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace soda

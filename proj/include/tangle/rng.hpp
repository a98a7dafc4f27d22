#pragma once

#include <cstdint>

namespace tangle {

// Deterministic pseudo-random stream (splitmix64). Standard library engines
// and distributions are avoided on purpose: their outputs differ between
// implementations, and experiment outputs must be byte-identical for a given
// seed on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Derives an independent stream from a base seed. Agent and environment
  // draws live on separate streams so that interleaving never changes when
  // one side draws more or less than before.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id) {
    Rng mixer(seed ^ (0x9e3779b97f4a7c15ull * (stream_id + 1)));
    return Rng(mixer.next_u64());
  }

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform double in [0, 1), 53 bits of precision.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::size_t uniform_below(std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace tangle

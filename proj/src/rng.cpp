#include "sdl/rng.hpp"

namespace sdl {

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    word = splitmix64_mix(x);
    x += 0x9E3779B97F4A7C15ULL;
  }
}

Xoshiro256pp path_stream(std::uint64_t seed, std::uint64_t index) {
  // Counter-based key: mix the master seed, then fold in the mixed counter.
  const std::uint64_t key = splitmix64_mix(seed ^ 0x5DEECE66DULL);
  return Xoshiro256pp(splitmix64_mix(key ^ splitmix64_mix(index)));
}

}  // namespace sdl

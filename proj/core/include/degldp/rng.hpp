#pragma once

#include <cstdint>
#include <random>
#include <utility>

namespace degldp {

// SplitMix64 finalizer; used to derive independent stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream = 0) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// std::mt19937_64 seeded through mix_seed. Streams derived from the same
// seed with different stream ids are used for parallel chains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : engine_(mix_seed(seed, stream)) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., bound - 1}, bound > 0, by multiply-shift with
  // rejection of the biased low band.
  std::uint64_t below(std::uint64_t bound) {
    __extension__ using u128 = unsigned __int128;
    u128 product = static_cast<u128>(engine_()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<u128>(engine_()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  // Independent uniforms on {0, ..., a - 1} and {0, ..., b - 1} from the two
  // 32-bit halves of one draw; 0 < a, b < 2^32.
  std::pair<std::uint32_t, std::uint32_t> below_pair(std::uint32_t a,
                                                     std::uint32_t b) {
    const std::uint32_t threshold_a = (0U - a) % a;
    const std::uint32_t threshold_b = (0U - b) % b;
    for (;;) {
      const std::uint64_t x = engine_();
      const std::uint64_t pa = (x >> 32) * a;
      const std::uint64_t pb = (x & 0xFFFFFFFFU) * b;
      if (static_cast<std::uint32_t>(pa) >= threshold_a &&
          static_cast<std::uint32_t>(pb) >= threshold_b) {
        return {static_cast<std::uint32_t>(pa >> 32),
                static_cast<std::uint32_t>(pb >> 32)};
      }
    }
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace degldp

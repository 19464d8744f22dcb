#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace bijshuf {

/// SplitMix64 finalizer. Bijective on 64-bit words; the standard avalanche
/// mixer used for seed expansion and key derivation throughout the library.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Golden-ratio increment of the SplitMix64 stream.
inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

/// Derives num_rounds 32-bit round keys from a 64-bit seed.
/// key_i = low 32 bits of mix64(seed + (i+1) * gamma). Deterministic.
inline std::vector<std::uint32_t> derive_round_keys(std::uint64_t seed,
                                                    int num_rounds) {
  if (num_rounds < 1) throw std::invalid_argument("num_rounds must be >= 1");
  std::vector<std::uint32_t> keys(static_cast<std::size_t>(num_rounds));
  for (int i = 0; i < num_rounds; ++i) {
    keys[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(
        mix64(seed + (static_cast<std::uint64_t>(i) + 1) * kSplitMixGamma));
  }
  return keys;
}

/// Minimal counter-based generator over the SplitMix64 stream.
/// Stateless draws: value k of stream s is mix64(s + k * gamma).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t operator()() noexcept {
    state_ += kSplitMixGamma;
    return mix64(state_);
  }

  static constexpr std::uint64_t min() noexcept { return 0; }
  static constexpr std::uint64_t max() noexcept { return ~0ULL; }

  /// Unbiased draw from [0, bound) by rejection; bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("bound must be >= 1");
    // Reject the tail of the 64-bit range that would wrap unevenly.
    const std::uint64_t limit = ~0ULL - (~0ULL % bound);
    std::uint64_t v;
    do {
      v = (*this)();
    } while (v >= limit);
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

}  // namespace bijshuf

#pragma once

#include <cstdint>
#include <stdexcept>
#include <type_traits>
#include <variant>
#include <vector>

#include "bijshuf/splitmix.hpp"

namespace bijshuf {

/// Affine map y = (a*x + c) mod 2^modulus_bits. Bijective iff a is odd.
struct LcgParams {
  int modulus_bits = 0;
  std::uint64_t a = 1;
  std::uint64_t c = 0;

  std::uint64_t domain_mask() const noexcept {
    return (modulus_bits >= 64) ? ~0ULL : ((1ULL << modulus_bits) - 1);
  }
};

/// Derives LCG parameters from a seed: a forced odd, both reduced mod 2^bits.
inline LcgParams make_lcg(int modulus_bits, std::uint64_t seed) {
  if (modulus_bits < 1 || modulus_bits > 63)
    throw std::invalid_argument("modulus_bits must be in [1, 63]");
  LcgParams p;
  p.modulus_bits = modulus_bits;
  const std::uint64_t mask = (1ULL << modulus_bits) - 1;
  p.a = (mix64(seed) | 1ULL) & mask;
  p.c = mix64(seed + 1) & mask;
  return p;
}

inline std::uint64_t lcg_apply(const LcgParams& p, std::uint64_t x) {
  const std::uint64_t mask = p.domain_mask();
  if (x > mask) throw std::out_of_range("lcg_apply: x outside [0, 2^bits)");
  return (p.a * x + p.c) & mask;
}

/// Feistel cipher over [0, 2^total_bits) with an unbalanced split:
/// left half floor(total_bits/2) bits, right half the remainder, so every
/// width from 2 to 63 bits is supported, odd widths included.
struct VariablePhiloxParams {
  int total_bits = 0;
  int left_side_bits = 0;
  int right_side_bits = 0;
  int num_rounds = 0;
  std::uint64_t left_side_mask = 0;
  std::uint64_t right_side_mask = 0;
  std::vector<std::uint32_t> round_keys;
};

namespace detail {

inline constexpr std::uint64_t kPhiloxM0 = 0xD2B74407B1CE6E93ULL;

/// Inverse of an odd multiplier modulo 2^64 by Newton iteration;
/// five steps double the valid bit count from 5 past 64.
constexpr std::uint64_t odd_inverse_pow2_64(std::uint64_t a) noexcept {
  std::uint64_t x = a;  // correct to 5 bits: a*a ≡ 1 (mod 32) for odd a
  for (int i = 0; i < 5; ++i) x *= 2 - a * x;
  return x;
}

static_assert(odd_inverse_pow2_64(kPhiloxM0) * kPhiloxM0 == 1ULL);

}  // namespace detail

/// Builds cipher parameters for a 2^total_bits domain with keys derived
/// from the seed. num_rounds >= 3; 24 is the recommended default.
inline VariablePhiloxParams make_philox(int total_bits, std::uint64_t seed,
                                        int num_rounds = 24) {
  if (total_bits < 2 || total_bits > 63)
    throw std::invalid_argument("total_bits must be in [2, 63]");
  if (num_rounds < 3)
    throw std::invalid_argument("num_rounds must be >= 3");
  VariablePhiloxParams p;
  p.total_bits = total_bits;
  p.left_side_bits = total_bits / 2;
  p.right_side_bits = total_bits - p.left_side_bits;
  p.num_rounds = num_rounds;
  p.left_side_mask = (1ULL << p.left_side_bits) - 1;
  p.right_side_mask = (1ULL << p.right_side_bits) - 1;
  p.round_keys = derive_round_keys(seed, num_rounds);
  return p;
}

/// One forward pass of the cipher. The round function multiplies the left
/// side by M0, XORs the high product word with the round key and the right
/// side, and rotates the low product word into the new right side; an
/// unbalanced split shifts the spare bit through the low word each round.
inline std::uint64_t philox_apply(const VariablePhiloxParams& p,
                                  std::uint64_t x) {
  if (p.total_bits < 64 && (x >> p.total_bits) != 0)
    throw std::out_of_range("philox_apply: x outside [0, 2^total_bits)");
  std::uint64_t s0 = x >> p.right_side_bits;
  std::uint64_t s1 = x & p.right_side_mask;
  const int d = p.right_side_bits - p.left_side_bits;
  for (int i = 0; i < p.num_rounds; ++i) {
    const std::uint64_t product = detail::kPhiloxM0 * s0;
    const std::uint64_t hi = product >> 32;
    std::uint64_t lo = product & 0xFFFFFFFFULL;
    lo = (lo << d) | (s1 >> p.left_side_bits);
    s0 = ((hi ^ p.round_keys[static_cast<std::size_t>(i)]) ^ s1) &
         p.left_side_mask;
    s1 = lo & p.right_side_mask;
  }
  return (s0 << p.right_side_bits) | s1;
}

/// Inverse cipher: unwinds rounds in reverse. Within the left width the
/// low product word is multiplication by an odd constant mod 2^left_bits,
/// inverted via the constant's modular inverse; the high word is recomputed
/// from the recovered left side to undo the XOR mixing.
inline std::uint64_t philox_invert(const VariablePhiloxParams& p,
                                   std::uint64_t y) {
  if (p.total_bits < 64 && (y >> p.total_bits) != 0)
    throw std::out_of_range("philox_invert: y outside [0, 2^total_bits)");
  constexpr std::uint64_t m0_inv = detail::odd_inverse_pow2_64(detail::kPhiloxM0);
  const int d = p.right_side_bits - p.left_side_bits;
  std::uint64_t t0 = y >> p.right_side_bits;   // final s0
  std::uint64_t t1 = y & p.right_side_mask;    // final s1
  for (int i = p.num_rounds - 1; i >= 0; --i) {
    // t1 = ((lo << d) | (prev_s1 >> left_bits)) & right_mask, where
    // lo = low 32 bits of M0 * prev_s0 and prev_s0 has left_bits bits,
    // so t1 >> d is lo reduced mod 2^left_bits and the low d bits of t1
    // are the spare bit(s) of prev_s1.
    const std::uint64_t spare = t1 & ((1ULL << d) - 1);
    const std::uint64_t lo_mod_left = (t1 >> d) & p.left_side_mask;
    const std::uint64_t s0 = (m0_inv * lo_mod_left) & p.left_side_mask;
    const std::uint64_t product = detail::kPhiloxM0 * s0;
    const std::uint64_t hi = product >> 32;
    const std::uint64_t s1 =
        (((hi ^ p.round_keys[static_cast<std::size_t>(i)]) ^ t0) &
         p.left_side_mask) |
        (spare << p.left_side_bits);
    t0 = s0;
    t1 = s1;
  }
  return (t0 << p.right_side_bits) | t1;
}

/// Tagged choice between the two bijection families.
struct BijectionSpec {
  std::variant<LcgParams, VariablePhiloxParams> variant;
  int domain_bits = 0;
};

inline BijectionSpec make_bijection(const LcgParams& p) {
  return BijectionSpec{p, p.modulus_bits};
}

inline BijectionSpec make_bijection(const VariablePhiloxParams& p) {
  return BijectionSpec{p, p.total_bits};
}

inline std::uint64_t bijection_apply(const BijectionSpec& spec,
                                     std::uint64_t x) {
  return std::visit(
      [x](const auto& p) -> std::uint64_t {
        if constexpr (std::is_same_v<std::decay_t<decltype(p)>, LcgParams>)
          return lcg_apply(p, x);
        else
          return philox_apply(p, x);
      },
      spec.variant);
}

}  // namespace bijshuf

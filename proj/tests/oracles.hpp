#pragma once

// Independent reference implementations used only by tests. These are
// deliberately written in the most direct way possible (quadratic loops,
// series expansions, exhaustive enumeration) so library results can be
// checked against code that shares no logic with the implementation.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

namespace oracles {

/// Reference SplitMix64 finalizer, written out separately from the library.
inline std::uint64_t ref_mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Quadratic-definition Kendall distance: count pairs ordered differently.
inline std::uint64_t brute_kendall(const std::vector<std::uint64_t>& a,
                                   const std::vector<std::uint64_t>& b) {
  const std::size_t n = a.size();
  std::uint64_t discordant = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool order_a = a[i] < a[j];
      const bool order_b = b[i] < b[j];
      if (order_a != order_b) ++discordant;
    }
  }
  return discordant;
}

/// All n! permutations of {0..n-1} in lexicographic order.
inline std::vector<std::vector<std::uint64_t>> enumerate_symmetric_group(int n) {
  std::vector<std::uint64_t> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), std::uint64_t{0});
  std::vector<std::vector<std::uint64_t>> all;
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return all;
}

/// erf by Taylor series for small arguments and the asymptotic
/// complementary continued fraction for large ones; independent of
/// std::erf. Accurate to ~1e-15 over the range used in tests.
inline double series_erf(double x) {
  const double ax = std::fabs(x);
  constexpr double two_over_sqrt_pi = 1.1283791670955125739;
  if (ax < 3.0) {
    // erf(x) = 2/sqrt(pi) * sum_{k>=0} (-1)^k x^{2k+1} / (k! (2k+1))
    double term = x;
    double sum = x;
    for (int k = 1; k < 200; ++k) {
      term *= -x * x / k;
      sum += term / (2 * k + 1);
      if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
    }
    return two_over_sqrt_pi * sum;
  }
  // erfc(x) = exp(-x^2)/(x sqrt(pi)) * 1/(1 + 1/(2x^2)/(1 + 2/(2x^2)/(...)))
  const double inv2x2 = 1.0 / (2.0 * ax * ax);
  double frac = 0.0;
  for (int k = 60; k >= 1; --k) frac = k * inv2x2 / (1.0 + frac);
  const double erfc = std::exp(-ax * ax) / (ax * std::sqrt(3.14159265358979323846)) /
                      (1.0 + frac);
  const double val = 1.0 - erfc;
  return x < 0 ? -val : val;
}

/// Sequential running-sum oracle for exclusive scan.
inline std::vector<std::uint64_t> sequential_exclusive_scan(
    const std::vector<std::uint8_t>& flags) {
  std::vector<std::uint64_t> out(flags.size());
  std::uint64_t run = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    out[i] = run;
    run += flags[i];
  }
  return out;
}

}  // namespace oracles

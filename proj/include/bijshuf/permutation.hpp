#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "bijshuf/splitmix.hpp"

namespace bijshuf {

/// A permutation of {0..n-1} in zero-based one-line notation:
/// entry k names the source index placed at output slot k.
using Permutation = std::vector<std::uint64_t>;

inline Permutation identity_permutation(std::uint64_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), std::uint64_t{0});
  return p;
}

/// True iff p is a rearrangement of {0..n-1}.
inline bool is_valid_permutation(const Permutation& p) {
  const std::uint64_t n = p.size();
  std::vector<bool> seen(n, false);
  for (std::uint64_t v : p) {
    if (v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

/// Uniform random permutation of length n by backward Fisher-Yates.
/// The sequential reference shuffle and the uniformity oracle for the
/// statistical tests.
template <typename Rng>
Permutation fisher_yates(std::uint64_t n, Rng& rng) {
  Permutation p = identity_permutation(n);
  for (std::uint64_t i = n; i > 1; --i) {
    const std::uint64_t j = rng.below(i);
    std::swap(p[static_cast<std::size_t>(i - 1)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

/// In-place Fisher-Yates over an arbitrary value array.
template <typename T, typename Rng>
void fisher_yates_shuffle(std::vector<T>& values, Rng& rng) {
  for (std::uint64_t i = values.size(); i > 1; --i) {
    const std::uint64_t j = rng.below(i);
    std::swap(values[static_cast<std::size_t>(i - 1)],
              values[static_cast<std::size_t>(j)]);
  }
}

namespace detail {

/// Counts inversions of seq by merge sort; seq is consumed as scratch.
inline std::uint64_t count_inversions(std::vector<std::uint64_t>& seq) {
  const std::size_t n = seq.size();
  std::vector<std::uint64_t> tmp(n);
  std::uint64_t inversions = 0;
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo + width < n; lo += 2 * width) {
      const std::size_t mid = lo + width;
      const std::size_t hi = std::min(lo + 2 * width, n);
      std::size_t i = lo, j = mid, k = lo;
      while (i < mid && j < hi) {
        if (seq[i] <= seq[j]) {
          tmp[k++] = seq[i++];
        } else {
          inversions += mid - i;  // seq[i..mid) all exceed seq[j]
          tmp[k++] = seq[j++];
        }
      }
      while (i < mid) tmp[k++] = seq[i++];
      while (j < hi) tmp[k++] = seq[j++];
      std::copy(tmp.begin() + static_cast<std::ptrdiff_t>(lo),
                tmp.begin() + static_cast<std::ptrdiff_t>(hi),
                seq.begin() + static_cast<std::ptrdiff_t>(lo));
    }
  }
  return inversions;
}

}  // namespace detail

/// Number of discordant pairs between two equal-length permutations:
/// pairs {i, j} that sigma and sigma_prime order differently. Relabels by
/// sigma's ranks and counts inversions of the relabeled sequence in
/// O(n log n).
inline std::uint64_t kendall_distance(const Permutation& sigma,
                                      const Permutation& sigma_prime) {
  if (sigma.size() != sigma_prime.size())
    throw std::invalid_argument("kendall_distance: length mismatch");
  const std::size_t n = sigma.size();
  std::vector<std::uint64_t> position(n);
  for (std::size_t k = 0; k < n; ++k)
    position[static_cast<std::size_t>(sigma[k])] = k;
  std::vector<std::uint64_t> relabeled(n);
  for (std::size_t r = 0; r < n; ++r)
    relabeled[r] = sigma_prime[static_cast<std::size_t>(position[r])];
  return detail::count_inversions(relabeled);
}

/// Lexicographic rank of sigma in [0, n!) via the Lehmer code.
/// Limited to n <= 20 so the rank fits in 64 bits.
inline std::uint64_t permutation_rank(const Permutation& sigma) {
  const std::size_t n = sigma.size();
  if (n > 20) throw std::overflow_error("permutation_rank: n! overflows past n=20");
  std::uint64_t factorial = 1;
  for (std::size_t i = 2; i < n; ++i) factorial *= i;  // (n-1)!
  std::uint64_t rank = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t smaller_after = 0;
    for (std::size_t j = i + 1; j < n; ++j)
      smaller_after += sigma[j] < sigma[i];
    rank += smaller_after * factorial;
    if (i + 1 < n) factorial /= (n - 1 - i);
  }
  return rank;
}

}  // namespace bijshuf

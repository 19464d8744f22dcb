#include "bijshuf/permutation.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "bijshuf/splitmix.hpp"
#include "oracles.hpp"

using namespace bijshuf;

namespace {

Permutation random_permutation(std::uint64_t n, SplitMix64& rng) {
  return fisher_yates(n, rng);
}

}  // namespace

TEST(KendallDistance, SelfDistanceZero) {
  SplitMix64 rng(1);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_permutation(37, rng);
    EXPECT_EQ(kendall_distance(p, p), 0u);
  }
}

TEST(KendallDistance, IdentityVsReversal) {
  const Permutation id = identity_permutation(4);
  const Permutation rev = {3, 2, 1, 0};
  EXPECT_EQ(kendall_distance(id, rev), 6u);  // C(4,2): every pair flips
}

TEST(KendallDistance, MatchesBruteForce) {
  SplitMix64 rng(2);
  for (int trial = 0; trial < 500; ++trial) {
    const std::uint64_t n = 2 + rng.below(199);
    const auto a = random_permutation(n, rng);
    const auto b = random_permutation(n, rng);
    ASSERT_EQ(kendall_distance(a, b), oracles::brute_kendall(a, b))
        << "trial " << trial << " n " << n;
  }
}

TEST(KendallDistance, Symmetric) {
  SplitMix64 rng(3);
  const auto a = random_permutation(100, rng);
  const auto b = random_permutation(100, rng);
  EXPECT_EQ(kendall_distance(a, b), kendall_distance(b, a));
}

TEST(KendallDistance, RejectsLengthMismatch) {
  EXPECT_THROW(kendall_distance(identity_permutation(3), identity_permutation(4)),
               std::invalid_argument);
}

TEST(PermutationRank, Identity) {
  EXPECT_EQ(permutation_rank(identity_permutation(5)), 0u);
}

TEST(PermutationRank, FullReversalIsLast) {
  EXPECT_EQ(permutation_rank({4, 3, 2, 1, 0}), 119u);
}

TEST(PermutationRank, BijectiveOverS5) {
  std::vector<bool> seen(120, false);
  for (const auto& p : oracles::enumerate_symmetric_group(5)) {
    const std::uint64_t r = permutation_rank(p);
    ASSERT_LT(r, 120u);
    ASSERT_FALSE(seen[static_cast<std::size_t>(r)]);
    seen[static_cast<std::size_t>(r)] = true;
  }
}

TEST(PermutationRank, LexicographicOrder) {
  // next_permutation enumerates lexicographically; ranks must follow.
  std::uint64_t expected = 0;
  for (const auto& p : oracles::enumerate_symmetric_group(4))
    EXPECT_EQ(permutation_rank(p), expected++);
}

TEST(PermutationRank, RejectsOverflowLength) {
  EXPECT_THROW(permutation_rank(identity_permutation(21)), std::overflow_error);
}

TEST(FisherYates, ProducesValidPermutations) {
  SplitMix64 rng(4);
  for (int i = 0; i < 20; ++i)
    EXPECT_TRUE(is_valid_permutation(fisher_yates(50, rng)));
}

TEST(FisherYates, CoversAllOfS3) {
  // 6 outcomes over 3000 draws: each should appear, roughly uniformly.
  SplitMix64 rng(5);
  std::vector<int> counts(6, 0);
  for (int i = 0; i < 3000; ++i)
    counts[static_cast<std::size_t>(permutation_rank(fisher_yates(3, rng)))]++;
  for (int c : counts) EXPECT_GT(c, 350);
}

TEST(IsValidPermutation, DetectsDefects) {
  EXPECT_TRUE(is_valid_permutation({2, 0, 1}));
  EXPECT_FALSE(is_valid_permutation({0, 0, 1}));
  EXPECT_FALSE(is_valid_permutation({0, 3, 1}));
  EXPECT_TRUE(is_valid_permutation({}));
}

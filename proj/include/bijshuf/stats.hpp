#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bijshuf/permutation.hpp"
#include "bijshuf/shuffle.hpp"
#include "bijshuf/splitmix.hpp"

namespace bijshuf {

// ---------------------------------------------------------------------------
// Mallows kernel and its moments under the uniform distribution
// ---------------------------------------------------------------------------

/// exp(-lambda * n_dis(sigma, sigma') / C(n,2)): 1 when equal, exp(-lambda)
/// when one is the reversal of the other.
inline double mallows_kernel(const Permutation& sigma,
                             const Permutation& sigma_prime, double lambda) {
  const std::size_t n = sigma.size();
  if (n < 2) throw std::invalid_argument("mallows_kernel: n must be >= 2");
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double d = static_cast<double>(kendall_distance(sigma, sigma_prime));
  return std::exp(-lambda * d / pairs);
}

namespace detail {

/// log(1 - e^{-x}) for x > 0, stable for both tiny and large x.
inline double log1mexp(double x) { return std::log(-std::expm1(-x)); }

}  // namespace detail

/// Expected kernel value between two independent uniform permutations:
/// product over j = 1..n of (1 - e^{-lambda j / C}) / (j (1 - e^{-lambda / C}))
/// with C = C(n,2), evaluated as a sum of logs so the n! denominator
/// cannot underflow.
inline double mallows_expectation(int n, double lambda) {
  if (n < 2) throw std::invalid_argument("mallows_expectation: n must be >= 2");
  if (lambda < 0) throw std::invalid_argument("mallows_expectation: lambda < 0");
  if (lambda == 0) return 1.0;  // kernel is identically 1 in the limit
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  const double unit = lambda / pairs;
  double log_sum = 0.0;
  for (int j = 1; j <= n; ++j) {
    log_sum += detail::log1mexp(unit * j) - std::log(static_cast<double>(j)) -
               detail::log1mexp(unit);
  }
  return std::exp(log_sum);
}

/// Var(K) under uniformity: squaring the kernel doubles lambda, so
/// E[K^2] = E_{2 lambda}[K].
inline double mallows_variance(int n, double lambda) {
  const double mean = mallows_expectation(n, lambda);
  const double second = mallows_expectation(n, 2 * lambda);
  const double var = second - mean * mean;
  return var < 0 ? 0.0 : var;
}

/// Cached moments for a fixed (n, lambda).
struct MallowsParams {
  double lambda = 5.0;
  int n = 0;
  double expectation = 0.0;
  double variance = 0.0;
};

inline MallowsParams make_mallows_params(int n, double lambda = 5.0) {
  MallowsParams p;
  p.lambda = lambda;
  p.n = n;
  p.expectation = mallows_expectation(n, lambda);
  p.variance = mallows_variance(n, lambda);
  return p;
}

// ---------------------------------------------------------------------------
// One-sample MMD^2 estimate and acceptance thresholds
// ---------------------------------------------------------------------------

/// Unbiased one-sample MMD^2 against the uniform distribution:
/// (2/|samples|) * sum of K over disjoint consecutive pairs, minus the
/// closed-form uniform expectation.
inline double mmd2_estimate(const std::vector<Permutation>& samples,
                            double lambda) {
  if (samples.empty() || samples.size() % 2 != 0)
    throw std::invalid_argument("mmd2_estimate: sample count must be even and > 0");
  const std::size_t n = samples[0].size();
  for (const auto& s : samples)
    if (s.size() != n)
      throw std::invalid_argument("mmd2_estimate: mixed permutation lengths");
  double kernel_sum = 0.0;
  for (std::size_t i = 0; i + 1 < samples.size(); i += 2)
    kernel_sum += mallows_kernel(samples[i], samples[i + 1], lambda);
  const double mean_kernel = 2.0 * kernel_sum / static_cast<double>(samples.size());
  return mean_kernel - mallows_expectation(static_cast<int>(n), lambda);
}

/// Distribution-free acceptance radius sqrt(log(2/alpha) / sample_size):
/// |MMD^2| below it is consistent with uniformity at level alpha.
inline double hoeffding_threshold(double alpha, std::uint64_t sample_size) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("hoeffding_threshold: alpha must be in (0, 1]");
  if (sample_size < 2 || sample_size % 2 != 0)
    throw std::invalid_argument("hoeffding_threshold: sample_size must be even and >= 2");
  return std::sqrt(std::log(2.0 / alpha) / static_cast<double>(sample_size));
}

/// Inverse error function on (-1, 1): initial rational approximation
/// refined by Newton steps against std::erf to full double precision.
inline double erf_inv(double x) {
  if (!(x > -1.0 && x < 1.0))
    throw std::out_of_range("erf_inv: argument must be in (-1, 1)");
  if (x == 0.0) return 0.0;
  // Winitzki's approximation as the starting point.
  constexpr double a = 0.147;
  constexpr double two_over_pi_a = 2.0 / (3.14159265358979323846 * a);
  const double ln1mx2 = std::log1p(-x * x);
  const double t = two_over_pi_a + 0.5 * ln1mx2;
  double y = std::sqrt(std::sqrt(t * t - ln1mx2 / a) - t);
  if (x < 0) y = -y;
  // Newton: d/dy erf(y) = 2/sqrt(pi) * exp(-y^2).
  constexpr double two_over_sqrt_pi = 1.12837916709551257390;
  for (int i = 0; i < 4; ++i) {
    const double err = std::erf(y) - x;
    y -= err / (two_over_sqrt_pi * std::exp(-y * y));
  }
  return y;
}

/// Acceptance radius from the normal limit of the estimator:
/// sqrt(2 * Var(MMD^2)) * erf_inv(1 - alpha), with
/// Var(MMD^2) = 2 Var(K) / sample_size. Tighter than Hoeffding for the
/// sample sizes this library targets.
inline double normal_threshold(double alpha, int n, double lambda,
                               std::uint64_t sample_size) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("normal_threshold: alpha must be in (0, 1]");
  if (sample_size < 2 || sample_size % 2 != 0)
    throw std::invalid_argument("normal_threshold: sample_size must be even and >= 2");
  const double var_kernel = mallows_variance(n, lambda);
  const double var_mmd = 2.0 * var_kernel / static_cast<double>(sample_size);
  return std::sqrt(2.0 * var_mmd) * erf_inv(1.0 - alpha);
}

// ---------------------------------------------------------------------------
// Chi-squared machinery
// ---------------------------------------------------------------------------

namespace detail {

/// Regularized lower incomplete gamma P(a, x): series expansion below
/// a + 1, Lentz continued fraction for the complement above it.
inline double regularized_gamma_p(double a, double x) {
  if (x < 0 || a <= 0) throw std::invalid_argument("regularized_gamma_p: bad arguments");
  if (x == 0) return 0.0;
  const double log_prefix = a * std::log(x) - x - std::lgamma(a);
  if (x < a + 1.0) {
    // P(a,x) = x^a e^{-x} / Gamma(a) * sum_k x^k / (a (a+1) ... (a+k))
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < 10000; ++k) {
      term *= x / (a + k);
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    return std::exp(log_prefix) * sum;
  }
  // Q(a,x) via modified Lentz on the standard continued fraction.
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 10000; ++k) {
    const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 - std::exp(log_prefix) * h;
}

}  // namespace detail

/// CDF of the chi-squared distribution with k degrees of freedom.
inline double chi2_cdf(double x, int k) {
  if (k < 1) throw std::invalid_argument("chi2_cdf: dof must be >= 1");
  if (x <= 0) return 0.0;
  return detail::regularized_gamma_p(0.5 * k, 0.5 * x);
}

/// Quantile of the chi-squared distribution: Wilson-Hilferty start,
/// Newton refinement on the CDF to 1e-10.
inline double chi2_quantile(double p, int k) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("chi2_quantile: p must be in (0, 1)");
  if (k < 1) throw std::invalid_argument("chi2_quantile: dof must be >= 1");
  const double kd = static_cast<double>(k);
  const double z = std::sqrt(2.0) * erf_inv(2.0 * p - 1.0);
  const double h = 2.0 / (9.0 * kd);
  double cube = 1.0 - h + z * std::sqrt(h);
  double x = kd * cube * cube * cube;
  if (x <= 0) x = 1e-8;
  for (int i = 0; i < 64; ++i) {
    const double err = chi2_cdf(x, k) - p;
    // Chi-squared density at x.
    const double log_pdf = (0.5 * kd - 1.0) * std::log(x) - 0.5 * x -
                           0.5 * kd * std::log(2.0) - std::lgamma(0.5 * kd);
    const double step = err / std::exp(log_pdf);
    x -= step;
    if (x <= 0) x = 1e-8;
    if (std::abs(err) < 1e-10 && std::abs(step) < 1e-8 * (1.0 + x)) break;
  }
  return x;
}

// ---------------------------------------------------------------------------
// Test drivers
// ---------------------------------------------------------------------------

enum class TestKind { ChiSquared, MmdHoeffding, MmdNormal };

struct TestReport {
  TestKind test_kind = TestKind::ChiSquared;
  double statistic = 0.0;
  double threshold = 0.0;
  double alpha = 0.0;
  std::uint64_t sample_size = 0;
  bool pass = false;
};

/// Goodness-of-fit over all 120 permutations of 5 elements: histogram the
/// Lehmer ranks of num_samples draws, compare against the uniform
/// expectation with 119 degrees of freedom. Requires at least 100 expected
/// draws per cell.
template <typename Sampler>
TestReport chi_squared_test(Sampler&& sampler, std::uint64_t num_samples,
                            double alpha) {
  constexpr std::uint64_t kCells = 120;
  if (num_samples < 12000)
    throw std::invalid_argument("chi_squared_test: need >= 12000 samples");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("chi_squared_test: alpha must be in (0, 1)");
  std::vector<std::uint64_t> counts(kCells, 0);
  for (std::uint64_t i = 0; i < num_samples; ++i) {
    const Permutation p = sampler();
    if (p.size() != 5)
      throw std::invalid_argument("chi_squared_test: sampler must yield length-5 permutations");
    counts[static_cast<std::size_t>(permutation_rank(p))] += 1;
  }
  const double expected = static_cast<double>(num_samples) / kCells;
  double statistic = 0.0;
  for (std::uint64_t c : counts) {
    const double diff = static_cast<double>(c) - expected;
    statistic += diff * diff / expected;
  }
  TestReport r;
  r.test_kind = TestKind::ChiSquared;
  r.statistic = statistic;
  r.threshold = chi2_quantile(1.0 - alpha, 119);
  r.alpha = alpha;
  r.sample_size = num_samples;
  r.pass = statistic < r.threshold;
  return r;
}

/// One-sample uniformity test: draws num_samples length-n permutations,
/// forms the MMD^2 estimate, and accepts when its magnitude is inside the
/// chosen threshold.
template <typename Sampler>
TestReport mmd_test(Sampler&& sampler, int n, std::uint64_t num_samples,
                    double alpha, TestKind kind, double lambda = 5.0) {
  if (kind != TestKind::MmdHoeffding && kind != TestKind::MmdNormal)
    throw std::invalid_argument("mmd_test: kind must be an MMD kind");
  if (num_samples < 2 || num_samples % 2 != 0)
    throw std::invalid_argument("mmd_test: num_samples must be even and >= 2");
  if (n < 2) throw std::invalid_argument("mmd_test: n must be >= 2");
  std::vector<Permutation> samples;
  samples.reserve(num_samples);
  for (std::uint64_t i = 0; i < num_samples; ++i) {
    samples.push_back(sampler());
    if (samples.back().size() != static_cast<std::size_t>(n))
      throw std::invalid_argument("mmd_test: sampler length mismatch");
  }
  TestReport r;
  r.test_kind = kind;
  r.statistic = mmd2_estimate(samples, lambda);
  r.threshold = kind == TestKind::MmdHoeffding
                    ? hoeffding_threshold(alpha, num_samples)
                    : normal_threshold(alpha, n, lambda, num_samples);
  r.alpha = alpha;
  r.sample_size = num_samples;
  r.pass = std::abs(r.statistic) < r.threshold;
  return r;
}

// ---------------------------------------------------------------------------
// Permutation sources
// ---------------------------------------------------------------------------

/// Draws each permutation from a fresh bijection keyed by a sequential
/// counter added to the base seed.
struct BijectiveShuffleSampler {
  std::uint64_t n;
  ShuffleConfig config;
  std::uint64_t counter = 0;

  Permutation operator()() {
    ShuffleConfig c = config;
    c.seed = config.seed + counter++;
    return shuffle_indices(n, c);
  }
};

/// Uniformity oracle: Fisher-Yates over a counter-based generator.
struct FisherYatesSampler {
  std::uint64_t n;
  SplitMix64 rng;

  FisherYatesSampler(std::uint64_t n_, std::uint64_t seed)
      : n(n_), rng(seed) {}

  Permutation operator()() { return fisher_yates(n, rng); }
};

/// Deliberately broken source: a point mass on the identity.
struct IdentitySampler {
  std::uint64_t n;
  Permutation operator()() const { return identity_permutation(n); }
};

}  // namespace bijshuf

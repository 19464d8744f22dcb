#pragma once

#include <tbb/parallel_sort.h>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bijshuf/permutation.hpp"
#include "bijshuf/shuffle.hpp"
#include "bijshuf/splitmix.hpp"

namespace bijshuf {

/// One timed measurement. runtime_s is the mean over trials; throughput is
/// input_size / runtime_s / 1e6.
struct BenchRecord {
  std::string algorithm;
  std::uint64_t input_size = 0;
  int trials = 0;
  double runtime_s = 0.0;
  double throughput_mitems_s = 0.0;
};

namespace detail {

inline double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

/// Times fn() trials times after one untimed warm-up and fills a record.
template <typename Fn>
BenchRecord time_trials(std::string name, std::uint64_t size, int trials,
                        Fn&& fn) {
  if (trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
  fn();  // warm-up, excluded from timing
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    const double t0 = now_seconds();
    fn();
    total += now_seconds() - t0;
  }
  BenchRecord r;
  r.algorithm = std::move(name);
  r.input_size = size;
  r.trials = trials;
  r.runtime_s = total / trials;
  r.throughput_mitems_s = static_cast<double>(size) / r.runtime_s / 1e6;
  return r;
}

inline void require_permutation_of_iota(const std::vector<std::uint64_t>& v,
                                        const char* who) {
  if (!is_valid_permutation(v))
    throw std::runtime_error(std::string(who) + ": output failed the permutation check");
}

}  // namespace detail

/// Upper-bound baseline: gather 64-bit values through a precomputed random
/// index array. Index generation is excluded from the timing.
inline BenchRecord bench_gather(std::uint64_t size, int trials,
                                std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("bench_gather: size must be >= 1");
  auto src = detail::make_buffer<std::uint64_t>(size);
  std::iota(src.begin(), src.end(), std::uint64_t{0});
  // Correctness pre-check: identity indices reproduce the input.
  {
    std::vector<std::uint64_t> identity(size);
    std::iota(identity.begin(), identity.end(), std::uint64_t{0});
    if (gather(src, identity) != src)
      throw std::runtime_error("bench_gather: identity gather is not a copy");
  }
  auto indices = detail::make_buffer<std::uint64_t>(size);
  SplitMix64 rng(seed);
  for (auto& v : indices) v = rng.below(size);
  auto out = detail::make_buffer<std::uint64_t>(size);
  return detail::time_trials("gather", size, trials,
                             [&] { gather_into(src, indices, out); });
}

/// The library's shuffle on an array of 64-bit keys.
inline BenchRecord bench_bijective(std::uint64_t size, int trials,
                                   std::uint64_t seed,
                                   ShuffleConfig config = {}) {
  if (size < 1) throw std::invalid_argument("bench_bijective: size must be >= 1");
  config.seed = seed;
  auto values = detail::make_buffer<std::uint64_t>(size);
  std::iota(values.begin(), values.end(), std::uint64_t{0});
  detail::require_permutation_of_iota(shuffle_values(values, config),
                                      "bench_bijective");
  auto out = detail::make_buffer<std::uint64_t>(size);
  return detail::time_trials("bijective", size, trials,
                             [&] { shuffle_values_into(values, config, out); });
}

/// Baseline shuffle by key-value sort: give every value a random 64-bit
/// key and sort the pairs with a parallel sort. Key regeneration between
/// trials is excluded from the timing.
inline BenchRecord bench_sort_shuffle(std::uint64_t size, int trials,
                                      std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("bench_sort_shuffle: size must be >= 1");
  struct Pair {
    std::uint64_t key, value;
  };
  auto pairs = detail::make_buffer<Pair>(size);
  std::uint64_t trial_counter = 0;
  const auto regenerate = [&] {
    const std::uint64_t stream = mix64(seed + trial_counter++);
    for (std::uint64_t i = 0; i < size; ++i) {
      pairs[static_cast<std::size_t>(i)].key = mix64(stream + i * kSplitMixGamma);
      pairs[static_cast<std::size_t>(i)].value = i;
    }
  };
  const auto sort_pairs = [&] {
    // In-place parallel sort: no O(size) scratch buffer, so the largest
    // grid sizes stay well inside memory alongside the other harnesses.
    tbb::parallel_sort(pairs.begin(), pairs.end(),
                       [](const Pair& a, const Pair& b) { return a.key < b.key; });
  };
  // Correctness pre-check: the sorted values form a permutation.
  regenerate();
  sort_pairs();
  {
    std::vector<std::uint64_t> vals(size);
    for (std::uint64_t i = 0; i < size; ++i)
      vals[static_cast<std::size_t>(i)] = pairs[static_cast<std::size_t>(i)].value;
    detail::require_permutation_of_iota(vals, "bench_sort_shuffle");
  }
  if (trials < 1) throw std::invalid_argument("bench: trials must be >= 1");
  // Warm-up already happened in the pre-check; keys must be re-randomized
  // before every timed sort or later trials would sort sorted data.
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    regenerate();
    const double t0 = detail::now_seconds();
    sort_pairs();
    total += detail::now_seconds() - t0;
  }
  BenchRecord r;
  r.algorithm = "sort_shuffle";
  r.input_size = size;
  r.trials = trials;
  r.runtime_s = total / trials;
  r.throughput_mitems_s = static_cast<double>(size) / r.runtime_s / 1e6;
  return r;
}

/// Sequential reference: in-place backward swap loop.
inline BenchRecord bench_fisher_yates(std::uint64_t size, int trials,
                                      std::uint64_t seed) {
  if (size < 1) throw std::invalid_argument("bench_fisher_yates: size must be >= 1");
  auto values = detail::make_buffer<std::uint64_t>(size);
  std::iota(values.begin(), values.end(), std::uint64_t{0});
  SplitMix64 rng(seed);
  fisher_yates_shuffle(values, rng);
  detail::require_permutation_of_iota(values, "bench_fisher_yates");
  return detail::time_trials("fisher_yates", size, trials,
                             [&] { fisher_yates_shuffle(values, rng); });
}

/// Default size grid 2^w + 1 for w in 8..26: one past each power of two,
/// the worst case for the padded-domain shuffle.
inline std::vector<std::uint64_t> default_bench_sizes() {
  std::vector<std::uint64_t> sizes;
  for (int w = 8; w <= 26; ++w) sizes.push_back((std::uint64_t{1} << w) + 1);
  return sizes;
}

inline const std::vector<std::string>& bench_algorithm_names() {
  static const std::vector<std::string> names = {"bijective", "gather",
                                                 "sort_shuffle", "fisher_yates"};
  return names;
}

/// Runs the cartesian product sizes x algorithms, one algorithm at a time.
inline std::vector<BenchRecord> run_suite(
    const std::vector<std::uint64_t>& sizes,
    const std::vector<std::string>& algorithms, int trials, std::uint64_t seed,
    ShuffleConfig config = {}) {
  std::vector<BenchRecord> records;
  for (std::uint64_t size : sizes) {
    for (const std::string& algo : algorithms) {
      if (algo == "bijective") {
        records.push_back(bench_bijective(size, trials, seed, config));
      } else if (algo == "gather") {
        records.push_back(bench_gather(size, trials, seed));
      } else if (algo == "sort_shuffle") {
        records.push_back(bench_sort_shuffle(size, trials, seed));
      } else if (algo == "fisher_yates") {
        records.push_back(bench_fisher_yates(size, trials, seed));
      } else {
        throw std::invalid_argument("run_suite: unknown algorithm " + algo);
      }
    }
  }
  return records;
}

inline constexpr const char* kBenchCsvHeader =
    "algorithm,input_size,trials,runtime_s,throughput_mitems_s";

/// Full-precision decimal rendering so records survive a CSV round trip.
inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << kBenchCsvHeader << '\n';
  for (const auto& r : records) {
    os << r.algorithm << ',' << r.input_size << ',' << r.trials << ','
       << format_double(r.runtime_s) << ',' << format_double(r.throughput_mitems_s)
       << '\n';
  }
  if (!os) throw std::runtime_error("write_csv: stream failure");
}

inline void write_json(std::ostream& os, const std::vector<BenchRecord>& records) {
  os << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    os << "  {\"algorithm\": \"" << r.algorithm
       << "\", \"input_size\": " << r.input_size << ", \"trials\": " << r.trials
       << ", \"runtime_s\": " << format_double(r.runtime_s)
       << ", \"throughput_mitems_s\": " << format_double(r.throughput_mitems_s)
       << "}" << (i + 1 < records.size() ? "," : "") << '\n';
  }
  os << "]\n";
  if (!os) throw std::runtime_error("write_json: stream failure");
}

/// Parses write_csv output back into records (testing and downstream use).
inline std::vector<BenchRecord> parse_csv(std::istream& is) {
  std::vector<BenchRecord> records;
  std::string line;
  if (!std::getline(is, line) || line != kBenchCsvHeader)
    throw std::runtime_error("parse_csv: missing or unexpected header");
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    BenchRecord r;
    std::size_t pos = 0;
    auto next_field = [&]() {
      const std::size_t comma = line.find(',', pos);
      const std::string field = line.substr(pos, comma - pos);
      pos = comma == std::string::npos ? line.size() : comma + 1;
      return field;
    };
    r.algorithm = next_field();
    r.input_size = std::stoull(next_field());
    r.trials = std::stoi(next_field());
    r.runtime_s = std::stod(next_field());
    r.throughput_mitems_s = std::stod(next_field());
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace bijshuf

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <thread>
#include <vector>

namespace bijshuf {

/// Elements per worker chunk in all chunked parallel primitives. Fixed so
/// that results never depend on the worker count or scheduling.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 16;

/// Resolves a worker-count request: 0 means one worker per hardware thread.
inline int resolve_workers(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {

/// Runs fn(worker_index) on `workers` threads and joins them all.
/// The calling thread acts as worker 0.
template <typename Fn>
void run_workers(int workers, Fn&& fn) {
  if (workers <= 1) {
    fn(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(fn, w);
  fn(0);
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Exclusive prefix sum: out[i] = sum of flags[j] for all j < i.
/// Chunked two-phase scan: each worker scans whole chunks locally, chunk
/// totals are scanned serially, then offsets are added back. Output is
/// identical for every worker count.
inline std::vector<std::uint64_t> exclusive_scan(
    const std::vector<std::uint8_t>& flags, int workers = 0) {
  const std::size_t n = flags.size();
  std::vector<std::uint64_t> out(n);
  if (n == 0) return out;

  const std::size_t num_chunks = (n + kChunkSize - 1) / kChunkSize;
  const int w = static_cast<int>(std::min<std::size_t>(
      static_cast<std::size_t>(resolve_workers(workers)), num_chunks));
  std::vector<std::uint64_t> totals(num_chunks);

  // Phase 1: local exclusive scan per chunk; record each chunk's total.
  detail::run_workers(w, [&](int wid) {
    for (std::size_t c = static_cast<std::size_t>(wid); c < num_chunks;
         c += static_cast<std::size_t>(w)) {
      const std::size_t lo = c * kChunkSize;
      const std::size_t hi = std::min(lo + kChunkSize, n);
      std::uint64_t run = 0;
      for (std::size_t i = lo; i < hi; ++i) {
        out[i] = run;
        run += flags[i];
      }
      totals[c] = run;
    }
  });

  // Phase 2: serial exclusive scan of the chunk totals.
  std::uint64_t run = 0;
  for (std::size_t c = 0; c < num_chunks; ++c) {
    const std::uint64_t t = totals[c];
    totals[c] = run;
    run += t;
  }

  // Phase 3: add each chunk's offset to its local results.
  detail::run_workers(w, [&](int wid) {
    for (std::size_t c = static_cast<std::size_t>(wid); c < num_chunks;
         c += static_cast<std::size_t>(w)) {
      const std::size_t lo = c * kChunkSize;
      const std::size_t hi = std::min(lo + kChunkSize, n);
      const std::uint64_t off = totals[c];
      for (std::size_t i = lo; i < hi; ++i) out[i] += off;
    }
  });

  return out;
}

}  // namespace bijshuf

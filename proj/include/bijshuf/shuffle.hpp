#pragma once

#include <atomic>
#include <bit>
#include <cstdint>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "bijshuf/bijection.hpp"
#include "bijshuf/memory.hpp"
#include "bijshuf/parallel.hpp"
#include "bijshuf/permutation.hpp"
#include "bijshuf/simd.hpp"

namespace bijshuf {

enum class BijectionVariant { Lcg, VariablePhilox };

/// Fully determines a shuffle: equal configs and lengths give bitwise
/// equal outputs, for any worker count. workers = 0 means one per
/// hardware thread.
struct ShuffleConfig {
  std::uint64_t seed = 0;
  BijectionVariant variant = BijectionVariant::VariablePhilox;
  int num_rounds = 24;
  int workers = 0;
};

/// Keeps only the entries of w below m, in order: the projection t from
/// permutations of n elements onto permutations of m elements.
inline Permutation compact_permutation(const Permutation& w, std::uint64_t m) {
  if (m > w.size())
    throw std::invalid_argument("compact_permutation: m exceeds length");
  Permutation out;
  out.reserve(static_cast<std::size_t>(m));
  for (std::uint64_t v : w)
    if (v < m) out.push_back(v);
  return out;
}

/// Domain width for an m-element shuffle: the next power of two that
/// holds m, but never below 16. Narrower Feistel domains (4 and 8
/// elements) have one-bit halves, which collapses the cipher to a handful
/// of distinct permutations regardless of keys; the 16-element floor costs
/// at most a few extra cipher calls for m <= 8.
inline int shuffle_domain_bits(std::uint64_t m) {
  const int needed = 64 - std::countl_zero(m - 1);  // ceil(log2 m), m >= 2
  return needed < 4 ? 4 : needed;
}

namespace detail {

/// Scalar fallback: apply the bijection to [start, start+len), keep
/// results < bound in order. Returns the survivor count.
template <typename ApplyFn>
std::uint64_t scalar_compact(const ApplyFn& apply, std::uint64_t start,
                             std::uint64_t len, std::uint64_t bound,
                             std::uint64_t* __restrict out) {
  std::uint64_t k = 0;
  for (std::uint64_t i = 0; i < len; ++i) {
    const std::uint64_t b = apply(start + i);
    out[k] = b;
    k += (b < bound) ? 1 : 0;
  }
  return k;
}

inline std::uint64_t philox_apply_unchecked(const VariablePhiloxParams& p,
                                            std::uint64_t x) noexcept {
  std::uint64_t s0 = x >> p.right_side_bits;
  std::uint64_t s1 = x & p.right_side_mask;
  const int d = p.right_side_bits - p.left_side_bits;
  const std::uint32_t* keys = p.round_keys.data();
  for (int i = 0; i < p.num_rounds; ++i) {
    const std::uint64_t product = kPhiloxM0 * s0;
    const std::uint64_t hi = product >> 32;
    std::uint64_t lo = product & 0xFFFFFFFFULL;
    lo = (lo << d) | (s1 >> p.left_side_bits);
    s0 = ((hi ^ keys[i]) ^ s1) & p.left_side_mask;
    s1 = lo & p.right_side_mask;
  }
  return (s0 << p.right_side_bits) | s1;
}

/// Per-chunk publication slot for the chained prefix. A chunk's output
/// offset is the running survivor count of all earlier chunks; it becomes
/// known as soon as the predecessor chunk publishes.
struct ChunkSlot {
  std::atomic<int> ready{0};
  std::uint64_t count = 0;
  std::uint64_t prefix = 0;
};

/// Engine core: evaluate the bijection over the padded domain in fixed
/// chunks, compact survivors per chunk, chain the chunk offsets, and hand
/// each finished chunk to the sink. Chunk boundaries and
/// the bijection alone determine the output, so any worker count produces
/// bitwise identical results.
///
/// Sink contract: drain(survivors, count, offset) writes count entries at
/// output positions [offset, offset+count). A chunk is drained as soon as
/// its offset is known, while the compacted buffer is still cache-hot from
/// evaluation.
template <typename EvalFn, typename DrainFn>
void chained_compact(std::uint64_t n, int workers, const EvalFn& eval,
                     const DrainFn& drain) {
  const std::uint64_t chunk = static_cast<std::uint64_t>(kChunkSize);
  const std::uint64_t num_chunks = (n + chunk - 1) / chunk;
  const int w = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), num_chunks));

  auto slots = std::make_unique<ChunkSlot[]>(num_chunks);
  std::atomic<std::uint64_t> ticket{0};

  const std::size_t buf_len = static_cast<std::size_t>(std::min(chunk, n));
  run_workers(w, [&](int) {
    std::vector<std::uint64_t> buf(buf_len);

    for (;;) {
      const std::uint64_t c = ticket.fetch_add(1, std::memory_order_relaxed);
      if (c >= num_chunks) break;
      const std::uint64_t start = c * chunk;
      const std::uint64_t len = std::min(chunk, n - start);

      const std::uint64_t count = eval(start, len, buf.data());

      // Publish this chunk's survivor count; offset chains off the
      // predecessor, so wait until it has published.
      std::uint64_t offset = 0;
      if (c > 0) {
        ChunkSlot& pred = slots[c - 1];
        while (pred.ready.load(std::memory_order_acquire) == 0)
          std::this_thread::yield();
        offset = pred.prefix + pred.count;
      }
      ChunkSlot& slot = slots[c];
      slot.count = count;
      slot.prefix = offset;
      slot.ready.store(1, std::memory_order_release);

      drain(buf.data(), count, offset);
    }
  });
}

/// Dispatches chunk evaluation to the vector kernel when built for
/// AVX-512 and the bijection is the Feistel cipher; scalar otherwise.
template <typename Sink>
void run_shuffle_engine(std::uint64_t m, const ShuffleConfig& cfg,
                        std::uint64_t n_bits, const Sink& sink) {
  const std::uint64_t n = std::uint64_t{1} << n_bits;
  const int workers = resolve_workers(cfg.workers);

  if (cfg.variant == BijectionVariant::Lcg) {
    const LcgParams params = make_lcg(static_cast<int>(n_bits), cfg.seed);
    const std::uint64_t mask = params.domain_mask();
    auto apply = [&params, mask](std::uint64_t x) noexcept {
      return (params.a * x + params.c) & mask;
    };
    auto eval = [&](std::uint64_t start, std::uint64_t len,
                    std::uint64_t* buf) {
      return scalar_compact(apply, start, len, m, buf);
    };
    chained_compact(n, workers, eval, sink.drain_fn());
    return;
  }

  const VariablePhiloxParams params =
      make_philox(static_cast<int>(n_bits), cfg.seed, cfg.num_rounds);
#if defined(__AVX512F__)
  if (params.num_rounds <= kMaxSimdRounds) {
    const PhiloxSimdState st(params);
    auto eval = [&](std::uint64_t start, std::uint64_t len,
                    std::uint64_t* buf) {
      return philox_compact_avx512(st, start, len, m, buf);
    };
    chained_compact(n, workers, eval, sink.drain_fn());
    return;
  }
#endif
  auto apply = [&params](std::uint64_t x) noexcept {
    return philox_apply_unchecked(params, x);
  };
  auto eval = [&](std::uint64_t start, std::uint64_t len, std::uint64_t* buf) {
    return scalar_compact(apply, start, len, m, buf);
  };
  chained_compact(n, workers, eval, sink.drain_fn());
}

template <typename T>
struct ValuesSink {
  const T* src;
  T* dst;

  auto drain_fn() const {
    const T* __restrict s = src;
    T* __restrict d = dst;
    return [s, d](const std::uint64_t* buf, std::uint64_t count,
                  std::uint64_t offset) {
      // Prefetching a fixed distance ahead hides most of the random-read
      // latency; the gather itself is then close to bandwidth bound.
      constexpr std::uint64_t kAhead = 48;
      for (std::uint64_t i = 0; i < count; ++i) {
        if (i + kAhead < count) __builtin_prefetch(s + buf[i + kAhead], 0, 2);
        d[offset + i] = s[buf[i]];
      }
    };
  }
};

struct IndicesSink {
  std::uint64_t* dst;

  auto drain_fn() const {
    std::uint64_t* __restrict d = dst;
    return [d](const std::uint64_t* buf, std::uint64_t count,
               std::uint64_t offset) {
      std::memcpy(d + offset, buf, count * sizeof(std::uint64_t));
    };
  }
};

inline void shuffle_indices_core(std::uint64_t m, const ShuffleConfig& cfg,
                                 std::uint64_t* out) {
  if (m == 0) return;
  if (m == 1) {
    out[0] = 0;
    return;
  }
  if (m == 2) {
    // One derived bit picks identity or swap; a two-element Feistel half
    // would be degenerate.
    const std::uint64_t bit = mix64(cfg.seed) & 1;
    out[0] = bit;
    out[1] = bit ^ 1;
    return;
  }
  const int bits = shuffle_domain_bits(m);
  run_shuffle_engine(m, cfg, static_cast<std::uint64_t>(bits),
                     IndicesSink{out});
}

template <typename T>
void shuffle_values_core(const T* values, std::uint64_t m,
                         const ShuffleConfig& cfg, T* out) {
  if (m == 0) return;
  if (m == 1) {
    out[0] = values[0];
    return;
  }
  if (m == 2) {
    const std::uint64_t bit = mix64(cfg.seed) & 1;
    out[0] = values[static_cast<std::size_t>(bit)];
    out[1] = values[static_cast<std::size_t>(bit ^ 1)];
    return;
  }
  const int bits = shuffle_domain_bits(m);
  run_shuffle_engine(m, cfg, static_cast<std::uint64_t>(bits),
                     ValuesSink<T>{values, out});
}

/// Resize for reuse: keep the existing pages when capacity suffices,
/// otherwise allocate fresh (with hugepage advice for large buffers).
template <typename T>
void ensure_buffer(std::vector<T>& v, std::size_t n) {
  if (v.capacity() >= n)
    v.resize(n);
  else
    v = make_buffer<T>(n);
}

}  // namespace detail

/// Deterministic pseudo-random permutation of {0..m-1}: pads the domain to
/// a power of two, applies the configured bijection to every counter, and
/// compacts the in-range results in counter order.
inline Permutation shuffle_indices(std::uint64_t m, const ShuffleConfig& cfg) {
  Permutation out = detail::make_buffer<std::uint64_t>(m);
  detail::shuffle_indices_core(m, cfg, out.data());
  return out;
}

/// shuffle_indices writing into a caller-owned buffer, resized to m.
/// Reusing one buffer across calls avoids per-call allocation and
/// first-touch faults.
inline void shuffle_indices_into(std::uint64_t m, const ShuffleConfig& cfg,
                                 Permutation& out) {
  detail::ensure_buffer(out, static_cast<std::size_t>(m));
  detail::shuffle_indices_core(m, cfg, out.data());
}

/// Reorders values by the same permutation shuffle_indices(|values|, cfg)
/// denotes, as a single fused pass: out[k] = values[sigma(k)]. Not in
/// place; the input is unchanged.
template <typename T>
std::vector<T> shuffle_values(const std::vector<T>& values,
                              const ShuffleConfig& cfg) {
  std::vector<T> out = detail::make_buffer<T>(values.size());
  detail::shuffle_values_core(values.data(), values.size(), cfg, out.data());
  return out;
}

/// shuffle_values writing into a caller-owned buffer, resized to match.
/// out must not alias values.
template <typename T>
void shuffle_values_into(const std::vector<T>& values,
                         const ShuffleConfig& cfg, std::vector<T>& out) {
  if (&out == &values)
    throw std::invalid_argument("shuffle_values_into: out aliases input");
  detail::ensure_buffer(out, values.size());
  detail::shuffle_values_core(values.data(), values.size(), cfg, out.data());
}

namespace detail {

template <typename T>
void gather_core(const T* __restrict s, const std::uint64_t* __restrict idx,
                 std::size_t n, int workers, T* __restrict d) {
  const int w = resolve_workers(workers);
  run_workers(w, [&](int wid) {
    const std::size_t lo = n * static_cast<std::size_t>(wid) /
                           static_cast<std::size_t>(w);
    const std::size_t hi = n * (static_cast<std::size_t>(wid) + 1) /
                           static_cast<std::size_t>(w);
    constexpr std::size_t kAhead = 48;
    for (std::size_t i = lo; i < hi; ++i) {
      if (i + kAhead < hi) __builtin_prefetch(s + idx[i + kAhead], 0, 2);
      d[i] = s[idx[i]];
    }
  });
}

}  // namespace detail

/// Parallel gather: out[i] = src[indices[i]]. Indices must be in range;
/// they are not validated here.
template <typename T>
std::vector<T> gather(const std::vector<T>& src,
                      const std::vector<std::uint64_t>& indices,
                      int workers = 0) {
  std::vector<T> out = detail::make_buffer<T>(indices.size());
  detail::gather_core(src.data(), indices.data(), indices.size(), workers,
                      out.data());
  return out;
}

/// gather writing into a caller-owned buffer, resized to |indices|. out
/// must alias neither src nor indices.
template <typename T>
void gather_into(const std::vector<T>& src,
                 const std::vector<std::uint64_t>& indices,
                 std::vector<T>& out, int workers = 0) {
  if (static_cast<const void*>(&out) == static_cast<const void*>(&src) ||
      static_cast<const void*>(&out) == static_cast<const void*>(&indices))
    throw std::invalid_argument("gather_into: out aliases an input");
  detail::ensure_buffer(out, indices.size());
  detail::gather_core(src.data(), indices.data(), indices.size(), workers,
                      out.data());
}

}  // namespace bijshuf

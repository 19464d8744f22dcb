#pragma once

// Allocation policy for the library's large working buffers: ask the OS
// for transparent huge pages before first touch. Random-access phases are
// TLB-bound on 4 KB pages once the working set passes a few megabytes.

#include <cstddef>
#include <cstdint>
#include <vector>

#if defined(__linux__)
#include <sys/mman.h>
#endif

namespace bijshuf::detail {

inline constexpr std::size_t kHugePageAdviseBytes = std::size_t{1} << 22;

/// Best-effort MADV_HUGEPAGE over the page-aligned interior of [p, p+bytes).
/// A no-op off Linux or when the kernel refuses; correctness never depends
/// on it.
inline void advise_hugepages(void* p, std::size_t bytes) {
#if defined(__linux__)
  constexpr std::uintptr_t page = 4096;
  const auto addr = reinterpret_cast<std::uintptr_t>(p);
  const std::uintptr_t lo = (addr + page - 1) & ~(page - 1);
  const std::uintptr_t hi = (addr + bytes) & ~(page - 1);
  if (hi > lo)
    madvise(reinterpret_cast<void*>(lo), hi - lo, MADV_HUGEPAGE);
#else
  (void)p;
  (void)bytes;
#endif
}

/// Vector whose backing store is advised for huge pages before the
/// elements are first touched; advice must precede the touch or the
/// mapping is already backed by small pages.
template <typename T>
std::vector<T> make_buffer(std::size_t n) {
  std::vector<T> v;
  v.reserve(n);
  if (n * sizeof(T) >= kHugePageAdviseBytes)
    advise_hugepages(v.data(), n * sizeof(T));
  v.resize(n);
  return v;
}

}  // namespace bijshuf::detail

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace symrmt {

/// 64-bit splitmix step. Used to derive independent per-draw / per-walker
/// seeds: derive_seed(seed, i) = splitmix64(seed ^ splitmix64(i + 1)).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(seed ^ splitmix64(index + 1));
}

using Rng = std::mt19937_64;

/// Worker count: RMT_THREADS when set (and > 0), otherwise the hardware
/// concurrency. Never less than one.
unsigned default_thread_count();

/// Runs body(i) for i in [0, count) on up to `threads` workers (0 = default).
/// Indices are split into contiguous blocks; body must only write state owned
/// by its index so results do not depend on the thread count.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  unsigned threads = 0);

}  // namespace symrmt

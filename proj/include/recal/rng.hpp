#pragma once

#include <cstdint>
#include <random>

namespace recal {

/// SplitMix64 finalizer. Used as a counter-based stream splitter: feeding
/// (master seed, task index) through it yields statistically independent
/// engine seeds, so parallel tasks are deterministic regardless of
/// scheduling order.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t task) {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (task + 1));
}

/// Engine for the task-th independent substream of a master seed.
inline std::mt19937_64 rng_for(std::uint64_t master, std::uint64_t task) {
  return std::mt19937_64(derive_seed(master, task));
}

}  // namespace recal

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

namespace tanglekit {

/// Counter-based seed derivation (SplitMix64 finalizer over the pair).
/// Results depend only on (seed, index), never on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  auto mix = [](std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  return mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ (index * 0xd1b54a32d192ed03ULL + 1));
}

/// Worker count: hardware concurrency, capped by TANGLEKIT_THREADS when set.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
/// The first exception thrown by any body is rethrown after all workers join.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace tanglekit

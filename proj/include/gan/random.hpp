#pragma once

#include <cstdint>
#include <random>

namespace gan {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Master seed of a run plus the rule that derives independent streams.
///
/// derive(stream, index) = RunSeed{ mix64(mix64(mix64(master) ^ stream) ^ index) }.
/// Chaining derive() builds a tree of counter-based streams, so every trial
/// seed is a pure function of (master, experiment id, trial index) and trials
/// can be evaluated in any order.
struct RunSeed {
  std::uint64_t master = 0;

  [[nodiscard]] constexpr RunSeed derive(std::uint64_t stream,
                                         std::uint64_t index) const noexcept {
    return RunSeed{mix64(mix64(mix64(master) ^ stream) ^ index)};
  }

  [[nodiscard]] Rng engine() const { return Rng{mix64(master)}; }

  friend constexpr bool operator==(RunSeed, RunSeed) = default;
};

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n), unbiased (rejection on the 64-bit range).
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// Uniform double in [lo, hi).
inline double uniform_real(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Stream ids used by the experiment harness and the CLI.
namespace streams {
inline constexpr std::uint64_t patterns = 1;
inline constexpr std::uint64_t perturbation = 2;
inline constexpr std::uint64_t multistate_patterns = 3;
inline constexpr std::uint64_t multistate_perturbation = 4;
inline constexpr std::uint64_t ff_networks = 5;
inline constexpr std::uint64_t ff_states = 6;
inline constexpr std::uint64_t moments = 7;
}  // namespace streams

}  // namespace gan

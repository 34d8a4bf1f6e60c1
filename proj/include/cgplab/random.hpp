#pragma once

#include <cstdint>
#include <random>

namespace cgplab {

/// SplitMix64 finalizer. Used to turn (base seed, index) pairs into
/// well-separated generator seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed for stream `index` derived from `base`. Replication r of an
/// experiment uses derive_seed(base_seed, r).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Deterministic random source.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The distributions below are implemented here rather than taken
/// from <random> because the standard library distributions are not required
/// to produce the same values across implementations.
class Rng {
  __extension__ typedef unsigned __int128 u128;

 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [lo, hi], inclusive. Lemire's multiply-shift with
  /// rejection, so the result is exactly uniform.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full 64-bit range
    u128 m = static_cast<u128>(next_u64()) * span;
    auto low = static_cast<std::uint64_t>(m);
    if (low < span) {
      const std::uint64_t threshold = (0 - span) % span;
      while (low < threshold) {
        m = static_cast<u128>(next_u64()) * span;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return lo + static_cast<std::int64_t>(m >> 64);
  }

  /// Uniform index in [0, n).
  std::size_t index(std::size_t n) {
    return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
  }

  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform real in [lo, hi).
  double uniform_real(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cgplab

#pragma once

#include <cstdint>
#include <limits>

namespace locrad {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent stream key from a master seed and a counter.
/// Every Monte Carlo draw in the library is keyed this way, so results do not
/// depend on evaluation order or thread count.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) noexcept {
  return mix64(mix64(master) ^ mix64(counter + 0x632be59bd9b4e019ULL));
}

/// Counter-based generator: the k-th output is mix64(key + k * golden).
/// Satisfies UniformRandomBitGenerator so it plugs into <random> distributions.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}
  constexpr CounterRng(std::uint64_t master, std::uint64_t counter) noexcept
      : key_(derive_seed(master, counter)) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() noexcept {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * (++counter_));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  /// Rademacher sign, +1 or -1 with equal probability.
  constexpr int sign() noexcept { return ((*this)() >> 63) != 0 ? 1 : -1; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace locrad

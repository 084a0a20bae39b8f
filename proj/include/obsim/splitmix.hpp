#pragma once

#include <cstdint>
#include <limits>

#include "obsim/errors.hpp"

namespace obsim {

/// SplitMix64 generator with the standard constants (Steele, Lea, Flood).
///
/// Every stochastic piece of the simulator draws from this one recurrence so
/// that golden sequences are reproducible across languages.
class SplitMix64 {
public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound). Raw outputs falling in the top
  /// 2^64 mod bound values are rejected so that the modulo is unbiased.
  constexpr std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) {
      throw DomainError("SplitMix64::below: bound must be positive");
    }
    const std::uint64_t tail = (0 - bound) % bound; // 2^64 mod bound
    const std::uint64_t limit = max() - tail;       // accept x <= limit
    for (;;) {
      const std::uint64_t x = (*this)();
      if (tail == 0 || x <= limit) {
        return x % bound;
      }
    }
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr std::uint64_t state() const noexcept { return state_; }

private:
  std::uint64_t state_;
};

} // namespace obsim

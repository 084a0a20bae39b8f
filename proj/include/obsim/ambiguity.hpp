#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "obsim/observer.hpp"
#include "obsim/worldmodel.hpp"

namespace obsim {

/// Finite Moore machine with a 1-bit output. out[s] is emitted while in
/// state s; the machine then moves to delta[s].
struct MooreBox {
  std::size_t initial = 0;
  std::vector<std::size_t> delta;
  std::vector<int> out;

  std::size_t states() const noexcept { return delta.size(); }
  void validate() const;
  /// First `count` outputs starting from the initial state.
  std::vector<int> run(std::size_t count) const;
};

struct SurprisePair {
  MooreBox a;
  MooreBox b;
};

/// Two boxes that emit `prefix` and then diverge at the next output.
///
/// `a` walks a chain of prefix.size() states and repeats the last bit;
/// `b` is `a` with one extra state emitting the complement.
SurprisePair surprise_pair(const std::vector<int> &prefix);

struct Presentation {
  std::int64_t tick = 0;
  int id = 0;
  double width_m = 0.0;

  friend bool operator==(const Presentation &, const Presentation &) = default;
};

using GodsEyeHistory = std::vector<Presentation>;

struct SubstitutionPair {
  GodsEyeHistory state_change;  // one object whose width toggles
  GodsEyeHistory substitution;  // distinct fixed-width objects swapped in
};

/// Two world histories the observer cannot tell apart from `stream`.
SubstitutionPair substitution_pair(const OutcomeStream &stream, const WorldSpec &spec);

/// The outcome stream an observer with `stick` would record for `history`.
OutcomeStream replay(const GodsEyeHistory &history, const MeterStick &stick);

struct ReversalCounts {
  std::array<std::int64_t, 2> unigram_forward{};
  std::array<std::int64_t, 2> unigram_reverse{};
  // Index 2*a + b counts the pattern "ab".
  std::array<std::int64_t, 4> bigram_forward{};
  std::array<std::int64_t, 4> bigram_reverse{};
};

/// Unigram and bigram counts of a stream read forwards and backwards.
ReversalCounts reversal_counts(const OutcomeStream &stream);

} // namespace obsim

#include "obsim/ambiguity.hpp"

#include <algorithm>
#include <optional>

namespace obsim {

void MooreBox::validate() const {
  if (delta.empty() || delta.size() != out.size()) {
    throw ContractViolation("MooreBox: transition and output tables must be non-empty and equal in size");
  }
  if (initial >= delta.size()) {
    throw ContractViolation("MooreBox: initial state out of range");
  }
  for (std::size_t s = 0; s < delta.size(); ++s) {
    if (delta[s] >= delta.size()) {
      throw ContractViolation("MooreBox: transition leaves the state set");
    }
    if (out[s] != 0 && out[s] != 1) {
      throw ContractViolation("MooreBox: outputs must be bits");
    }
  }
}

std::vector<int> MooreBox::run(std::size_t count) const {
  validate();
  std::vector<int> bits;
  bits.reserve(count);
  std::size_t state = initial;
  for (std::size_t i = 0; i < count; ++i) {
    bits.push_back(out[state]);
    state = delta[state];
  }
  return bits;
}

SurprisePair surprise_pair(const std::vector<int> &prefix) {
  if (prefix.empty()) {
    throw DomainError("surprise_pair: prefix must be non-empty");
  }
  const std::size_t n = prefix.size();
  MooreBox a;
  a.delta.resize(n);
  a.out.resize(n);
  for (std::size_t s = 0; s < n; ++s) {
    if (prefix[s] != 0 && prefix[s] != 1) {
      throw ContractViolation("surprise_pair: prefix must contain bits only");
    }
    a.out[s] = prefix[s];
    a.delta[s] = s + 1 < n ? s + 1 : s;
  }

  MooreBox b = a;
  b.delta[n - 1] = n;
  b.delta.push_back(n);
  b.out.push_back(1 - prefix.back());
  return {std::move(a), std::move(b)};
}

SubstitutionPair substitution_pair(const OutcomeStream &stream, const WorldSpec &spec) {
  if (stream.empty()) {
    throw DomainError("substitution_pair: empty stream");
  }
  const auto &stick = spec.detector();
  std::vector<const WorldObject *> matching;
  std::vector<const WorldObject *> other;
  for (const auto &o : spec.objects()) {
    (measure(stick, o.width_m) ? matching : other).push_back(&o);
  }
  if (matching.empty() || other.empty()) {
    throw DomainError("substitution_pair: world needs both matching and non-matching objects");
  }

  // The toggling object keeps the identity of the first matching object.
  const WorldObject &toggler = *matching.front();
  const WorldObject &stand_in_one = matching.size() > 1 ? *matching[1] : *matching.front();
  const WorldObject &stand_in_zero = *other.front();

  SubstitutionPair pair;
  pair.state_change.reserve(stream.size());
  pair.substitution.reserve(stream.size());
  for (const auto &r : stream.records()) {
    const double toggled = r.bit ? toggler.width_m : stand_in_zero.width_m;
    pair.state_change.push_back({r.tick, toggler.id, toggled});
    const WorldObject &swapped = r.bit ? stand_in_one : stand_in_zero;
    pair.substitution.push_back({r.tick, swapped.id, swapped.width_m});
  }
  return pair;
}

OutcomeStream replay(const GodsEyeHistory &history, const MeterStick &stick) {
  OutcomeStream s;
  for (const auto &p : history) {
    s.append(p.tick, measure(stick, p.width_m));
  }
  return s;
}

ReversalCounts reversal_counts(const OutcomeStream &stream) {
  if (stream.size() < 2) {
    throw DomainError("reversal_counts: stream needs at least two records");
  }
  const auto bits = stream.bits();
  std::vector<int> rev(bits.rbegin(), bits.rend());

  ReversalCounts c;
  auto count = [](const std::vector<int> &xs, std::array<std::int64_t, 2> &uni,
                  std::array<std::int64_t, 4> &bi) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      ++uni[static_cast<std::size_t>(xs[i])];
      if (i + 1 < xs.size()) {
        ++bi[static_cast<std::size_t>(2 * xs[i] + xs[i + 1])];
      }
    }
  };
  count(bits, c.unigram_forward, c.bigram_forward);
  count(rev, c.unigram_reverse, c.bigram_reverse);
  return c;
}

} // namespace obsim

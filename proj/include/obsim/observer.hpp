#pragma once

#include <cstdint>
#include <vector>

#include "obsim/detector.hpp"
#include "obsim/worldmodel.hpp"

namespace obsim {

inline constexpr double kBoltzmann = 1.380649e-23; // J/K, exact SI value
inline constexpr double kPlanck = 6.62607015e-34;  // J*s, exact SI value

/// Free energy per recorded bit, in units of kT. The default is the 0.7
/// figure used throughout; ln2 is the exact Landauer bound.
enum class LandauerCoefficient { point_seven, ln2 };

double coefficient_value(LandauerCoefficient c) noexcept;

struct ObserverClock {
  double delta_t_s = 2e-13;
  std::int64_t ticks = 0;
};

struct OutcomeRecord {
  std::int64_t tick = 0;
  int bit = 0;

  friend bool operator==(const OutcomeRecord &, const OutcomeRecord &) = default;
};

/// Tick-ordered bit records: everything the observer knows.
class OutcomeStream {
public:
  OutcomeStream() = default;
  /// Bits at ticks 0..bits.size()-1.
  static OutcomeStream from_bits(const std::vector<int> &bits);

  void append(std::int64_t tick, int bit);

  const std::vector<OutcomeRecord> &records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }
  std::vector<int> bits() const;

  friend bool operator==(const OutcomeStream &, const OutcomeStream &) = default;

private:
  std::vector<OutcomeRecord> records_;
};

/// Landauer cost accounting for the observer's recordings.
///
/// free_energy() is recomputed as bits * (c k T) rather than accumulated, so
/// it stays within rounding of the exact product however many bits are
/// recorded.
class EnergyLedger {
public:
  explicit EnergyLedger(double temperature_K,
                        LandauerCoefficient coefficient = LandauerCoefficient::point_seven);

  double temperature() const noexcept { return temperature_; }
  LandauerCoefficient coefficient() const noexcept { return coefficient_; }
  std::int64_t bits_recorded() const noexcept { return bits_; }
  double cost_per_bit() const noexcept { return per_bit_; }
  double free_energy() const noexcept { return static_cast<double>(bits_) * per_bit_; }

  void charge_bit() noexcept { ++bits_; }

private:
  double temperature_;
  LandauerCoefficient coefficient_;
  double per_bit_;
  std::int64_t bits_ = 0;
};

/// Appends (tick, bit) to the stream and charges one bit to the ledger.
void record(EnergyLedger &ledger, OutcomeStream &stream, std::int64_t tick, int bit);

/// Minimal action to receive and encode one bit: c * k * T * dt, in J*s.
double action_quantum(double temperature_K, double delta_t_s,
                      LandauerCoefficient coefficient = LandauerCoefficient::point_seven);

struct Session {
  OutcomeStream stream;
  EnergyLedger ledger;
  ObserverClock clock;
};

/// Presents, measures and records once per tick for ticks 0..ticks-1.
Session run_session(const WorldSpec &spec, const PresentationSchedule &schedule,
                    const MeterStick &stick, double temperature_K, double delta_t_s,
                    std::int64_t ticks,
                    LandauerCoefficient coefficient = LandauerCoefficient::point_seven);

} // namespace obsim

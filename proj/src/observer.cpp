#include "obsim/observer.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace obsim {

double coefficient_value(LandauerCoefficient c) noexcept {
  return c == LandauerCoefficient::ln2 ? std::numbers::ln2 : 0.7;
}

OutcomeStream OutcomeStream::from_bits(const std::vector<int> &bits) {
  OutcomeStream s;
  s.records_.reserve(bits.size());
  for (std::size_t i = 0; i < bits.size(); ++i) {
    s.append(static_cast<std::int64_t>(i), bits[i]);
  }
  return s;
}

void OutcomeStream::append(std::int64_t tick, int bit) {
  if (bit != 0 && bit != 1) {
    throw ContractViolation("outcome bits must be 0 or 1, got " + std::to_string(bit));
  }
  if (!records_.empty() && tick <= records_.back().tick) {
    throw ContractViolation("outcome ticks must be strictly increasing (last " +
                            std::to_string(records_.back().tick) + ", got " +
                            std::to_string(tick) + ")");
  }
  records_.push_back({tick, bit});
}

std::vector<int> OutcomeStream::bits() const {
  std::vector<int> out;
  out.reserve(records_.size());
  for (const auto &r : records_) {
    out.push_back(r.bit);
  }
  return out;
}

EnergyLedger::EnergyLedger(double temperature_K, LandauerCoefficient coefficient)
    : temperature_(temperature_K), coefficient_(coefficient) {
  if (!(std::isfinite(temperature_K) && temperature_K > 0.0)) {
    throw DomainError("temperature must be positive");
  }
  per_bit_ = coefficient_value(coefficient) * kBoltzmann * temperature_K;
}

void record(EnergyLedger &ledger, OutcomeStream &stream, std::int64_t tick, int bit) {
  stream.append(tick, bit);
  ledger.charge_bit();
}

double action_quantum(double temperature_K, double delta_t_s, LandauerCoefficient coefficient) {
  if (!(std::isfinite(temperature_K) && temperature_K > 0.0)) {
    throw DomainError("action_quantum: temperature must be positive");
  }
  if (!(std::isfinite(delta_t_s) && delta_t_s > 0.0)) {
    throw DomainError("action_quantum: clock period must be positive");
  }
  return coefficient_value(coefficient) * kBoltzmann * temperature_K * delta_t_s;
}

Session run_session(const WorldSpec &spec, const PresentationSchedule &schedule,
                    const MeterStick &stick, double temperature_K, double delta_t_s,
                    std::int64_t ticks, LandauerCoefficient coefficient) {
  if (ticks < 0) {
    throw ContractViolation("run_session: ticks must be non-negative");
  }
  stick.validate();
  if (!(std::isfinite(delta_t_s) && delta_t_s > 0.0)) {
    throw DomainError("run_session: clock period must be positive");
  }
  Session session{OutcomeStream{}, EnergyLedger(temperature_K, coefficient),
                  ObserverClock{delta_t_s, 0}};
  Presenter presenter(spec, schedule);
  for (std::int64_t t = 0; t < ticks; ++t) {
    const auto &obj = spec.objects()[presenter.next_index()];
    record(session.ledger, session.stream, t, measure(stick, obj.width_m));
    ++session.clock.ticks;
  }
  return session;
}

} // namespace obsim

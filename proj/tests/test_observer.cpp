#include <doctest.h>

#include <cmath>
#include <numbers>

#include "obsim/observer.hpp"
#include "test_helpers.hpp"

using namespace obsim;

TEST_CASE("measure fires on the target width only") {
  const MeterStick stick{};
  CHECK(measure(stick, 1.0) == 1);
  CHECK(measure(stick, 0.5) == 0);
  CHECK(measure(stick, 1.0 + stick.tolerance_m) == 1);
  CHECK(measure(stick, 1.0 + 2 * stick.tolerance_m) == 0);
  CHECK(measure(stick, 1.0 - 2 * stick.tolerance_m) == 0);
  CHECK(measure(MeterStick{1.0, 0.0}, 1.0) == 1);
  for (int i = 0; i < 10; ++i) {
    CHECK(measure(stick, 0.75) == 0);
  }
}

TEST_CASE("ledger charges c k T per bit") {
  EnergyLedger ledger(310.0);
  OutcomeStream stream;
  CHECK(ledger.free_energy() == 0.0);
  record(ledger, stream, 0, 1);
  const double per_bit = 0.7 * 1.380649e-23 * 310.0;
  CHECK(ledger.free_energy() == doctest::Approx(per_bit).epsilon(1e-15));
  CHECK(ledger.free_energy() == doctest::Approx(2.996e-21).epsilon(1e-3));
  for (int t = 1; t < 1000; ++t) {
    record(ledger, stream, t, t % 2);
  }
  CHECK(ledger.bits_recorded() == 1000);
  CHECK(ledger.free_energy() == doctest::Approx(1000 * per_bit).epsilon(1e-15));
  CHECK(stream.size() == 1000);

  CHECK_THROWS_AS(record(ledger, stream, 999, 0), ContractViolation);
  CHECK_THROWS_AS(record(ledger, stream, 2000, 2), ContractViolation);
  CHECK_THROWS_AS(EnergyLedger(0.0), DomainError);

  const EnergyLedger exact(310.0, LandauerCoefficient::ln2);
  CHECK(exact.cost_per_bit() == doctest::Approx(std::numbers::ln2 * 1.380649e-23 * 310.0));
}

TEST_CASE("action quantum") {
  const double h = action_quantum(310.0, 200e-15);
  CHECK(h == doctest::Approx(5.992e-34).epsilon(1e-3));
  CHECK(action_quantum(310.0, 400e-15) == doctest::Approx(2 * h).epsilon(1e-15));
  CHECK_THROWS_AS(action_quantum(310.0, 0.0), DomainError);
  CHECK_THROWS_AS(action_quantum(-1.0, 1e-13), DomainError);
  CHECK(kBoltzmann * 310.0 == doctest::Approx(4.3e-21).epsilon(0.01));
}

TEST_CASE("run_session") {
  const WorldSpec w({{0, 1.0}, {1, 2.0}, {2, 1.0}});
  const PresentationSchedule cyc{};
  const MeterStick stick{};

  SUBCASE("empty session") {
    const auto s = run_session(w, cyc, stick, 310.0, 2e-13, 0);
    CHECK(s.stream.empty());
    CHECK(s.ledger.free_energy() == 0.0);
  }
  SUBCASE("cyclic world") {
    const auto s = run_session(w, cyc, stick, 310.0, 2e-13, 6);
    CHECK(s.stream.bits() == std::vector<int>{1, 0, 1, 1, 0, 1});
    CHECK(s.ledger.bits_recorded() == 6);
    for (std::size_t i = 0; i < s.stream.size(); ++i) {
      CHECK(s.stream.records()[i].tick == static_cast<std::int64_t>(i));
    }
  }
  SUBCASE("cyclic sessions are periodic") {
    std::vector<WorldObject> objs;
    for (int i = 0; i < 7; ++i) {
      objs.push_back({i, (i * 5) % 3 == 0 ? 1.0 : 0.3});
    }
    const WorldSpec world(objs);
    const PresentationSchedule perm{ScheduleKind::cyclic, 0, {3, 1, 6, 0, 2, 5, 4}};
    const auto bits = run_session(world, perm, stick, 300.0, 1e-12, 70).stream.bits();
    for (std::size_t i = 7; i < bits.size(); ++i) {
      CHECK(bits[i] == bits[i - 7]);
    }
  }
  SUBCASE("seeded sessions are reproducible") {
    const auto world = testing::two_class_world(30, 70);
    const auto a = run_session(world, testing::uniform_schedule(5), stick, 310, 2e-13, 5000);
    const auto b = run_session(world, testing::uniform_schedule(5), stick, 310, 2e-13, 5000);
    CHECK(a.stream == b.stream);
    CHECK(a.ledger.bits_recorded() == 5000);
    const double ratio = a.ledger.free_energy() / (0.7 * kBoltzmann * 310.0);
    CHECK(std::fabs(ratio - 5000.0) / 5000.0 < 1e-12);
  }
  CHECK_THROWS_AS(run_session(w, cyc, stick, 310.0, 2e-13, -1), ContractViolation);
  CHECK_THROWS_AS(run_session(w, cyc, stick, 0.0, 2e-13, 3), DomainError);
}

TEST_CASE("outcome stream construction") {
  const auto s = OutcomeStream::from_bits({0, 1, 1});
  CHECK(s.records().back() == OutcomeRecord{2, 1});
  CHECK_THROWS_AS(OutcomeStream::from_bits({0, 3}), ContractViolation);
}

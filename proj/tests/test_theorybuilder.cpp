#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "obsim/theorybuilder.hpp"
#include "test_helpers.hpp"

using namespace obsim;
using C = std::complex<double>;

namespace {

CMatrix<double> random_unitary(int d, std::mt19937_64 &rng) {
  std::normal_distribution<double> g;
  CMatrix<double> z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      z(i, j) = C(g(rng), g(rng));
    }
  }
  return Eigen::HouseholderQR<CMatrix<double>>(z).householderQ();
}

PhaseFunctions<double> random_phases(int d, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  PhaseFunctions<double> ph{RVector<double>(d), RVector<double>(d)};
  for (int i = 0; i < d; ++i) {
    ph.omegas(i) = u(rng) * 1e3;
    ph.thetas(i) = u(rng);
  }
  return ph;
}

AmplitudeVector<double> random_amplitudes(int d, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RVector<double> a(d);
  for (int i = 0; i < d; ++i) {
    a(i) = u(rng) + 1e-3;
  }
  return AmplitudeVector<double>(a / a.norm());
}

} // namespace

TEST_CASE("standard projections") {
  const auto fam2 = standard_projections(2);
  CMatrix<double> e0 = CMatrix<double>::Zero(2, 2);
  e0(0, 0) = 1.0;
  CHECK(fam2.projections[0] == e0);
  CHECK((fam2.projections[0] * fam2.projections[1]).isZero(0.0));

  for (int d = 2; d <= 8; ++d) {
    const auto fam = standard_projections(d);
    CMatrix<double> sum = CMatrix<double>::Zero(d, d);
    for (int i = 0; i < d; ++i) {
      const auto &ei = fam.projections[static_cast<std::size_t>(i)];
      CHECK(ei * ei == ei);
      CHECK(ei.adjoint() == ei);
      for (int j = 0; j < d; ++j) {
        if (i != j) {
          CHECK((ei * fam.projections[static_cast<std::size_t>(j)]).isZero(0.0));
        }
      }
      sum += ei;
    }
    CHECK(sum == CMatrix<double>::Identity(d, d));
  }
  CHECK_THROWS_AS(standard_projections(1), DomainError);
}

TEST_CASE("amplitudes must be normalized") {
  CHECK_THROWS_AS(AmplitudeVector<double>(RVector<double>::Constant(2, 1.0)), ContractViolation);
  CHECK_NOTHROW(AmplitudeVector<double>(RVector<double>::Constant(2, std::sqrt(0.5))));
}

TEST_CASE("state_at") {
  const double r = 1.0 / std::sqrt(2.0);
  SUBCASE("basis state") {
    const AmplitudeVector<double> a(RVector<double>::Unit(2, 0));
    PhaseFunctions<double> ph{RVector<double>::Constant(2, 3.0), RVector<double>::Constant(2, 1.0)};
    const auto psi = state_at(a, ph, 0.37);
    CHECK(std::abs(psi(0)) == doctest::Approx(1.0));
    CHECK(psi(1) == C(0.0, 0.0));
  }
  SUBCASE("equal superposition at t=0") {
    const AmplitudeVector<double> a(RVector<double>::Constant(2, r));
    const auto psi = state_at(a, PhaseFunctions<double>::zero(2), 0.0);
    CHECK(psi(0) == C(r, 0.0));
    CHECK(psi(1) == C(r, 0.0));
  }
  SUBCASE("quarter-turn phase") {
    const AmplitudeVector<double> a(RVector<double>::Constant(2, r));
    PhaseFunctions<double> ph{RVector<double>(2), RVector<double>::Zero(2)};
    ph.omegas << 0.0, std::numbers::pi;
    const auto psi = state_at(a, ph, 0.5);
    CHECK(std::abs(psi(0) - C(0.7071067811865476, 0.0)) < 1e-12);
    CHECK(std::abs(psi(1) - C(0.0, -0.7071067811865476)) < 1e-12);
    CHECK(std::abs(psi.norm() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(state_at(AmplitudeVector<double>(RVector<double>::Unit(3, 0)),
                           PhaseFunctions<double>::zero(2), 0.0),
                  ContractViolation);
}

TEST_CASE("propagator_at") {
  const AmplitudeVector<double> a(RVector<double>::Constant(2, std::sqrt(0.5)));
  CHECK(propagator_at(a, PhaseFunctions<double>::zero(2), 1.0) ==
        CMatrix<double>::Identity(2, 2));

  PhaseFunctions<double> flip{RVector<double>::Zero(2), RVector<double>(2)};
  flip.thetas << 0.0, std::numbers::pi;
  const auto u = propagator_at(a, flip, 0.0);
  CHECK(std::abs(u(0, 0) - C(1, 0)) < 1e-15);
  CHECK(std::abs(u(1, 1) - C(-1, 0)) < 1e-15);
  CHECK(std::abs(u(0, 1)) == 0.0);

  std::mt19937_64 rng(2024);
  double worst = 0.0;
  for (int draw = 0; draw < 1000; ++draw) {
    const int d = 2 + draw % 7;
    const auto ph = random_phases(d, rng);
    const double t = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    const auto ud = propagator_at(random_amplitudes(d, rng), ph, t);
    // Oracle: direct product against the identity.
    const CMatrix<double> diff = ud * ud.adjoint() - CMatrix<double>::Identity(d, d);
    worst = std::max(worst, diff.cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("check_unitary") {
  const auto id = check_unitary(CMatrix<double>::Identity(3, 3), 1e-12);
  CHECK(id.unitary);
  CHECK(id.deviation == 0.0);

  CMatrix<double> stretch = CMatrix<double>::Identity(2, 2);
  stretch(1, 1) = 2.0;
  const auto bad = check_unitary(stretch);
  CHECK_FALSE(bad.unitary);
  CHECK(bad.deviation == doctest::Approx(3.0));

  CHECK_THROWS_AS(check_unitary(CMatrix<double>::Zero(2, 3)), ContractViolation);

  std::mt19937_64 rng(7);
  for (int draw = 0; draw < 100; ++draw) {
    const int d = 2 + draw % 5;
    const auto u = propagator_at(random_amplitudes(d, rng), random_phases(d, rng), 0.25);
    CHECK(check_unitary(u, 1e-12).unitary);
  }
}

TEST_CASE("step") {
  const double r = 1.0 / std::sqrt(2.0);
  CVector<double> plus(2);
  plus << r, r;
  CHECK(step(plus, CMatrix<double>(CMatrix<double>::Identity(2, 2))) == plus);

  CMatrix<double> z = CMatrix<double>::Identity(2, 2);
  z(1, 1) = -1.0;
  const auto minus = step(plus, z);
  CHECK(minus(0) == C(r, 0));
  CHECK(minus(1) == C(-r, 0));

  CMatrix<double> stretch = z * 2.0;
  CHECK_THROWS_AS(step(plus, stretch), ContractViolation);
  CVector<double> unnormalized = plus * 3.0;
  CHECK_THROWS_AS(step(unnormalized, z), ContractViolation);

  SUBCASE("norm drift over 10^4 steps") {
    std::mt19937_64 rng(99);
    const auto u = random_unitary(4, rng);
    CVector<double> psi = CVector<double>::Unit(4, 0);
    for (int i = 0; i < 10000; ++i) {
      psi = step(psi, u);
    }
    CHECK(std::abs(psi.norm() - 1.0) < 1e-9);
  }
}

TEST_CASE("born_estimate") {
  SUBCASE("ten ones") {
    const auto est = born_estimate(OutcomeStream::from_bits(std::vector<int>(10, 1)));
    CHECK(est.frequencies[1] == 1.0);
    CHECK(est.frequencies[0] == 0.0);
    CHECK(est.smoothed[0] == doctest::Approx(1.0 / 12.0));
    CHECK(est.smoothed[1] == doctest::Approx(11.0 / 12.0));
    CHECK(est.total() == 10);
  }
  SUBCASE("alternating") {
    const auto est = born_estimate(OutcomeStream::from_bits({0, 1, 0, 1}));
    CHECK(est.frequencies == std::vector<double>{0.5, 0.5});
  }
  SUBCASE("frequencies are reversal invariant") {
    std::vector<int> bits;
    std::mt19937 rng(1);
    for (int i = 0; i < 777; ++i) {
      bits.push_back(static_cast<int>(rng() % 2));
    }
    const auto fwd = born_estimate(OutcomeStream::from_bits(bits));
    std::reverse(bits.begin(), bits.end());
    const auto rev = born_estimate(OutcomeStream::from_bits(bits));
    CHECK(fwd.frequencies == rev.frequencies);
    CHECK(fwd.counts == rev.counts);
  }
  SUBCASE("seeded world converges to n / (n + m)") {
    const auto world = testing::two_class_world(30, 70);
    const auto s = run_session(world, testing::uniform_schedule(7), MeterStick{}, 310.0, 2e-13,
                               100000);
    const auto est = born_estimate(s.stream);
    const auto band = stats::binomial_central_band(100000, 0.3, 0.997);
    CHECK(est.counts[1] >= band.lo);
    CHECK(est.counts[1] <= band.hi);
    // Normal-approximation 3 sigma envelope as a cross-check of the band.
    const double sigma = std::sqrt(100000 * 0.3 * 0.7);
    CHECK(std::fabs(static_cast<double>(est.counts[1]) - 30000.0) <= 3 * sigma);
    CHECK(est.wilson95[1].lo < est.frequencies[1]);
    CHECK(est.wilson95[1].hi > est.frequencies[1]);
  }
  CHECK_THROWS_AS(born_estimate(OutcomeStream{}), DomainError);
}

TEST_CASE("infer_amplitudes") {
  auto from_freq = [](double f0) {
    BornEstimate est;
    est.frequencies = {f0, 1.0 - f0};
    return infer_amplitudes(est);
  };
  const auto half = from_freq(0.5);
  CHECK(half[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  const auto pure = from_freq(1.0);
  CHECK(pure[0] == 1.0);
  CHECK(pure[1] == 0.0);
  const auto skew = from_freq(0.7);
  CHECK(skew[0] == doctest::Approx(0.8366600265340756).epsilon(1e-12));
  CHECK(skew[1] == doctest::Approx(0.5477225575051661).epsilon(1e-12));
  CHECK(std::abs(skew.values().squaredNorm() - 1.0) < 1e-12);
}

TEST_CASE("float scalar instantiation") {
  const auto fam = standard_projections<float>(3);
  const AmplitudeVector<float> a(RVector<float>::Unit(3, 2), 1e-6f);
  const auto u = propagator_at(a, PhaseFunctions<float>::zero(3), 0.0f, fam);
  CHECK(check_unitary(u, 1e-6f).unitary);
}

#pragma once

// Observer-side reconstruction of a quantum description from outcome counts:
// outcome projectors, phase-carrying states, the one-tick propagator, and
// Born-frequency estimates. Dense types are templated on the real scalar.

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "obsim/errors.hpp"
#include "obsim/observer.hpp"
#include "obsim/stats.hpp"

namespace obsim {

template <class Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;
template <class Scalar> using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Default tolerance for unitarity and norm checks (d <= 64, double).
inline constexpr double kUnitaryTol = 1e-12;

template <class Scalar> struct ProjectionFamily {
  std::vector<CMatrix<Scalar>> projections;

  Eigen::Index dim() const {
    return projections.empty() ? 0 : projections.front().rows();
  }
};

/// E_i = |i><i| for i in [0, d).
template <class Scalar = double> ProjectionFamily<Scalar> standard_projections(int d) {
  if (d < 2) {
    throw DomainError("standard_projections: dimension must be at least 2");
  }
  ProjectionFamily<Scalar> family;
  family.projections.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    CMatrix<Scalar> e = CMatrix<Scalar>::Zero(d, d);
    e(i, i) = Scalar(1);
    family.projections.push_back(std::move(e));
  }
  return family;
}

/// Real amplitudes with unit sum of squares.
template <class Scalar = double> class AmplitudeVector {
public:
  explicit AmplitudeVector(RVector<Scalar> alphas, Scalar tol = Scalar(kUnitaryTol))
      : alphas_(std::move(alphas)) {
    if (alphas_.size() < 1) {
      throw ContractViolation("amplitudes: need at least one component");
    }
    if (!alphas_.allFinite() || std::abs(alphas_.squaredNorm() - Scalar(1)) > tol) {
      throw ContractViolation("amplitudes: squares must sum to 1");
    }
  }

  const RVector<Scalar> &values() const noexcept { return alphas_; }
  Eigen::Index dim() const noexcept { return alphas_.size(); }
  Scalar operator[](Eigen::Index i) const { return alphas_(i); }

private:
  RVector<Scalar> alphas_;
};

/// Affine phases phi_i(t) = omega_i * t + theta_i, in radians.
template <class Scalar = double> struct PhaseFunctions {
  RVector<Scalar> omegas;
  RVector<Scalar> thetas;

  static PhaseFunctions zero(Eigen::Index d) {
    return {RVector<Scalar>::Zero(d), RVector<Scalar>::Zero(d)};
  }

  Eigen::Index dim() const noexcept { return omegas.size(); }

  RVector<Scalar> operator()(Scalar t) const {
    if (omegas.size() != thetas.size()) {
      throw ContractViolation("phases: omegas and thetas differ in length");
    }
    return omegas * t + thetas;
  }
};

/// Serializable bundle of everything the observer reconstructs.
struct QuantumDescription {
  int d = 2;
  std::vector<double> alphas;
  std::vector<double> omegas;
  std::vector<double> thetas;
};

namespace detail {
template <class Scalar> void check_dims(Eigen::Index a, Eigen::Index b, const char *what) {
  if (a != b) {
    throw ContractViolation(std::string(what) + ": dimension mismatch");
  }
}
template <class Scalar> std::complex<Scalar> unit_phase(Scalar phi) {
  return std::polar(Scalar(1), -phi);
}
} // namespace detail

/// Component i is alpha_i * exp(-i phi_i(t)).
template <class Scalar>
CVector<Scalar> state_at(const AmplitudeVector<Scalar> &alphas,
                         const PhaseFunctions<Scalar> &phases, Scalar t) {
  detail::check_dims<Scalar>(alphas.dim(), phases.dim(), "state_at");
  const RVector<Scalar> phi = phases(t);
  CVector<Scalar> psi(alphas.dim());
  for (Eigen::Index i = 0; i < psi.size(); ++i) {
    psi(i) = alphas[i] * detail::unit_phase(phi(i));
  }
  return psi;
}

/// U(t) = sum_i exp(-i phi_i(t)) E_i.
///
/// The amplitudes set the state, not the propagator: weighting E_i by
/// alpha_i would make U non-unitary whenever some alpha_i < 1. They are
/// still accepted so the call validates the full description.
template <class Scalar>
CMatrix<Scalar> propagator_at(const AmplitudeVector<Scalar> &alphas,
                              const PhaseFunctions<Scalar> &phases, Scalar t,
                              const ProjectionFamily<Scalar> &family) {
  detail::check_dims<Scalar>(alphas.dim(), phases.dim(), "propagator_at");
  detail::check_dims<Scalar>(static_cast<Eigen::Index>(family.projections.size()),
                             phases.dim(), "propagator_at");
  const RVector<Scalar> phi = phases(t);
  CMatrix<Scalar> u = CMatrix<Scalar>::Zero(family.dim(), family.dim());
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    u += detail::unit_phase(phi(i)) * family.projections[static_cast<std::size_t>(i)];
  }
  return u;
}

template <class Scalar>
CMatrix<Scalar> propagator_at(const AmplitudeVector<Scalar> &alphas,
                              const PhaseFunctions<Scalar> &phases, Scalar t) {
  return propagator_at(alphas, phases, t,
                       standard_projections<Scalar>(static_cast<int>(alphas.dim())));
}

template <class Scalar> struct UnitarityReport {
  bool unitary = false;
  Scalar deviation = 0; // max |(U U^dagger - I)_ij|
};

template <class Derived>
auto check_unitary(const Eigen::MatrixBase<Derived> &u,
                   typename Eigen::NumTraits<typename Derived::Scalar>::Real tol =
                       kUnitaryTol) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  if (u.rows() != u.cols()) {
    throw ContractViolation("check_unitary: matrix must be square");
  }
  const auto n = u.rows();
  const Real deviation =
      n == 0 ? Real(0)
             : (u * u.adjoint() -
                Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(
                    n, n))
                   .cwiseAbs()
                   .maxCoeff();
  return UnitarityReport<Real>{deviation <= tol, deviation};
}

/// Advances a normalized state by one tick: returns u * state.
template <class Scalar>
CVector<Scalar> step(const CVector<Scalar> &state, const CMatrix<Scalar> &u,
                     Scalar unitary_tol = Scalar(1e-10)) {
  detail::check_dims<Scalar>(u.cols(), state.size(), "step");
  const auto report = check_unitary(u, unitary_tol);
  if (!report.unitary) {
    throw ContractViolation("step: propagator is not unitary (deviation " +
                            std::to_string(static_cast<double>(report.deviation)) + ")");
  }
  if (std::abs(state.norm() - Scalar(1)) > Scalar(1e-9)) {
    throw ContractViolation("step: state is not normalized");
  }
  return u * state;
}

/// Outcome counts and frequency summaries for a recorded stream.
struct BornEstimate {
  std::vector<std::int64_t> counts;
  std::vector<double> frequencies;
  std::vector<stats::Interval> wilson95;
  // Add-one (uniform prior) estimate: (count_i + 1) / (total + d).
  std::vector<double> smoothed;

  std::int64_t total() const;
};

/// Requires a non-empty stream; outcomes must lie in [0, dim).
BornEstimate born_estimate(const OutcomeStream &stream, int dim = 2);

/// alpha_i = sqrt(frequency_i), renormalized. A working rule for the
/// observer, not something the stream can prove.
AmplitudeVector<double> infer_amplitudes(const BornEstimate &estimate);

} // namespace obsim

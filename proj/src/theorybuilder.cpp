#include "obsim/theorybuilder.hpp"

#include <numeric>

namespace obsim {

std::int64_t BornEstimate::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
}

BornEstimate born_estimate(const OutcomeStream &stream, int dim) {
  if (stream.empty()) {
    throw DomainError("born_estimate: empty stream");
  }
  if (dim < 2) {
    throw DomainError("born_estimate: dimension must be at least 2");
  }
  BornEstimate est;
  est.counts.assign(static_cast<std::size_t>(dim), 0);
  for (const auto &r : stream.records()) {
    if (r.bit < 0 || r.bit >= dim) {
      throw ContractViolation("born_estimate: outcome outside [0, dim)");
    }
    ++est.counts[static_cast<std::size_t>(r.bit)];
  }
  const auto total = static_cast<std::int64_t>(stream.size());
  const double n = static_cast<double>(total);
  for (auto c : est.counts) {
    est.frequencies.push_back(static_cast<double>(c) / n);
    est.wilson95.push_back(stats::wilson(c, total));
    est.smoothed.push_back((static_cast<double>(c) + 1.0) / (n + dim));
  }
  return est;
}

AmplitudeVector<double> infer_amplitudes(const BornEstimate &estimate) {
  RVector<double> alphas(static_cast<Eigen::Index>(estimate.frequencies.size()));
  for (Eigen::Index i = 0; i < alphas.size(); ++i) {
    const double f = estimate.frequencies[static_cast<std::size_t>(i)];
    if (!(f >= 0.0)) {
      throw ContractViolation("infer_amplitudes: negative frequency");
    }
    alphas(i) = std::sqrt(f);
  }
  const double norm = alphas.norm();
  if (norm == 0.0) {
    throw ContractViolation("infer_amplitudes: all frequencies are zero");
  }
  return AmplitudeVector<double>(alphas / norm);
}

} // namespace obsim

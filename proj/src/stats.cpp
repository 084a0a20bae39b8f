#include "obsim/stats.hpp"

#include <cmath>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "obsim/errors.hpp"

namespace obsim::stats {

Interval wilson(std::int64_t successes, std::int64_t trials, double z) {
  if (trials <= 0 || successes < 0 || successes > trials) {
    throw DomainError("wilson: need 0 <= successes <= trials, trials > 0");
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * n)) / (1.0 + z2 / n);
  const double half = z / (1.0 + z2 / n) * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

CountBand binomial_central_band(std::int64_t trials, double p, double coverage) {
  if (trials <= 0 || !(p > 0.0 && p < 1.0) || !(coverage > 0.0 && coverage < 1.0)) {
    throw DomainError("binomial_central_band: need trials > 0, 0 < p < 1, 0 < coverage < 1");
  }
  const double tail = (1.0 - coverage) / 2.0;
  const double n = static_cast<double>(trials);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  std::vector<double> pmf(static_cast<std::size_t>(trials) + 1);
  for (std::int64_t k = 0; k <= trials; ++k) {
    const double kk = static_cast<double>(k);
    pmf[static_cast<std::size_t>(k)] = std::exp(std::lgamma(n + 1) - std::lgamma(kk + 1) -
                                                std::lgamma(n - kk + 1) + kk * lp + (n - kk) * lq);
  }
  CountBand band{0, trials};
  double below = 0.0;
  while (band.lo < trials && below + pmf[static_cast<std::size_t>(band.lo)] <= tail) {
    below += pmf[static_cast<std::size_t>(band.lo++)];
  }
  double above = 0.0;
  while (band.hi > 0 && above + pmf[static_cast<std::size_t>(band.hi)] <= tail) {
    above += pmf[static_cast<std::size_t>(band.hi--)];
  }
  return band;
}

double chi_square_statistic(std::span<const double> observed, std::span<const double> expected) {
  if (observed.size() != expected.size()) {
    throw ContractViolation("chi_square_statistic: size mismatch");
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      throw DomainError("chi_square_statistic: expected counts must be positive");
    }
    const double diff = observed[i] - expected[i];
    chi2 += diff * diff / expected[i];
  }
  return chi2;
}

double chi_square_critical(double degrees_of_freedom, double probability) {
  return boost::math::quantile(boost::math::chi_squared(degrees_of_freedom), probability);
}

} // namespace obsim::stats

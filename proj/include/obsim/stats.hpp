#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace obsim::stats {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

/// Wilson score interval for `successes` out of `trials`.
Interval wilson(std::int64_t successes, std::int64_t trials, double z = kZ95);

/// Smallest count interval [lo, hi] such that a Binomial(trials, p) variable
/// falls below lo, and above hi, each with probability at most (1-coverage)/2.
/// Computed from the exact probability mass function in log space.
struct CountBand {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
};
CountBand binomial_central_band(std::int64_t trials, double p, double coverage);

/// sup |F_n - F| between an empirical sample and a reference CDF.
template <class Cdf> double ks_distance(std::span<const double> sample, Cdf &&cdf) {
  std::vector<double> sorted(sample.begin(), sample.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double i0 = static_cast<double>(i);
    d = std::max({d, (i0 + 1.0) / n - f, f - i0 / n});
  }
  return d;
}

/// Pearson statistic sum (observed - expected)^2 / expected.
double chi_square_statistic(std::span<const double> observed, std::span<const double> expected);

/// Upper quantile of the chi-square distribution.
double chi_square_critical(double degrees_of_freedom, double probability);

} // namespace obsim::stats

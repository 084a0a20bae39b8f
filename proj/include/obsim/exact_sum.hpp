#pragma once

#include <cmath>
#include <vector>

namespace obsim {

/// Exact floating-point accumulator (Shewchuk's non-overlapping partials).
///
/// The running sum is held without rounding error; value() returns the
/// correctly rounded total. Merging two accumulators is exact too, so the
/// rounded total of a set of terms does not depend on how the set was split.
/// Intermediate overflow is not handled; terms must be finite.
class ExactSum {
public:
  void add(double x) {
    std::size_t kept = 0;
    for (double y : partials_) {
      if (std::fabs(x) < std::fabs(y)) {
        std::swap(x, y);
      }
      const double hi = x + y;
      const double lo = y - (hi - x);
      if (lo != 0.0) {
        partials_[kept++] = lo;
      }
      x = hi;
    }
    partials_.resize(kept);
    partials_.push_back(x);
  }

  void merge(const ExactSum &other) {
    for (double p : other.partials_) {
      add(p);
    }
  }

  double value() const {
    if (partials_.empty()) {
      return 0.0;
    }
    // Round-half-even correction as in Python's math.fsum.
    auto n = partials_.size();
    double hi = partials_[--n];
    double lo = 0.0;
    while (n > 0) {
      const double x = hi;
      const double y = partials_[--n];
      hi = x + y;
      const double yr = hi - x;
      lo = y - yr;
      if (lo != 0.0) {
        break;
      }
    }
    if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) ||
                  (lo > 0.0 && partials_[n - 1] > 0.0))) {
      const double y = lo * 2.0;
      const double x = hi + y;
      if (y == x - hi) {
        hi = x;
      }
    }
    return hi;
  }

private:
  std::vector<double> partials_;
};

} // namespace obsim

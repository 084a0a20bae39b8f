#pragma once

#include <cmath>

namespace obsim {

/// The observer's 1-bit detector: fires on objects of the target width.
struct MeterStick {
  double target_width_m = 1.0;
  double tolerance_m = 1e-6;

  void validate() const;
};

/// 1 iff |width - target| <= tolerance (closed interval), else 0.
inline int measure(const MeterStick &stick, double width_m) noexcept {
  return std::fabs(width_m - stick.target_width_m) <= stick.tolerance_m ? 1 : 0;
}

} // namespace obsim

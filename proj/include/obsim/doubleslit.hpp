#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "obsim/splitmix.hpp"

namespace obsim::doubleslit {

/// Fraunhofer two-slit instrument settings, SI units.
struct SlitConfig {
  double slit_width_m = 2e-6;      // a
  double separation_m = 10e-6;     // d, centre to centre
  double wavelength_m = 500e-9;    // lambda (de Broglie for massive particles)
  double screen_distance_m = 1.0;  // L
  bool left_open = true;
  bool right_open = true;
  bool which_path = false;
  double rate_per_s = 100.0;
  double screen_halfwidth_m = 0.2; // x and y span [-W, W]

  void validate() const;
  bool coherent_two_slit() const noexcept { return left_open && right_open && !which_path; }
  bool any_open() const noexcept { return left_open || right_open; }

  friend bool operator==(const SlitConfig &, const SlitConfig &) = default;
};

/// Single-slit diffraction envelope sinc^2(pi a u / (lambda L)), 1 at u = 0.
double envelope(double u, const SlitConfig &cfg);

/// Relative screen intensity at x for the current slit state.
double intensity(double x, const SlitConfig &cfg);

/// lambda L / d; DomainError unless the coherent two-slit mode is active.
double fringe_spacing(const SlitConfig &cfg);

/// Intensity of the same slits with interference removed (which-path sum).
double incoherent_baseline(double x, const SlitConfig &cfg);

inline constexpr std::size_t kDefaultGridPoints = std::size_t{1} << 16;

/// Intensity tabulated on a uniform grid over [-W, W] with its normalized
/// trapezoidal cumulative, for inverse-CDF sampling.
class PatternTable {
public:
  PatternTable(const SlitConfig &cfg, std::size_t points = kDefaultGridPoints);

  const std::vector<double> &x() const noexcept { return x_; }
  const std::vector<double> &intensity() const noexcept { return intensity_; }
  /// Trapezoidal integral of the intensity over the screen.
  double integral() const noexcept { return integral_; }

  /// Linear interpolation of the tabulated cumulative.
  double cdf(double x) const;
  /// Inverse of cdf() for u in [0, 1].
  double inverse_cdf(double u) const;

private:
  std::vector<double> x_;
  std::vector<double> intensity_;
  std::vector<double> cumulative_;
  double integral_ = 0.0;
};

struct DetectionEvent {
  double x_m = 0.0;
  double y_m = 0.0;
  std::int64_t tick = 0;
};

/// Stateful event source: one detection per draw, ticks continue across
/// batches and reconfiguration.
class EventSampler {
public:
  EventSampler(const SlitConfig &cfg, std::uint64_t seed);

  std::vector<DetectionEvent> draw(std::size_t count);
  /// Switches the instrument; later draws follow the new pattern.
  void reconfigure(const SlitConfig &cfg);

  const SlitConfig &config() const noexcept { return cfg_; }
  const PatternTable *table() const noexcept { return table_.get(); }
  std::int64_t next_tick() const noexcept { return next_tick_; }

private:
  SlitConfig cfg_;
  std::shared_ptr<const PatternTable> table_; // null when both slits are closed
  SplitMix64 rng_;
  std::int64_t next_tick_ = 0;
};

/// `count` iid detections with ticks 0..count-1.
std::vector<DetectionEvent> sample_events(const SlitConfig &cfg, std::size_t count,
                                          std::uint64_t seed);

/// Number of emissions due after `elapsed_s` on a fixed 1/rate cadence.
std::int64_t events_due(double rate_per_s, double elapsed_s);

inline constexpr std::size_t kMinVisibilityEvents = 10'000;

/// Fringe visibility of the detections in the central region.
///
/// The region is |x| <= 2 lambda L / d when both slits are open, else
/// |x| <= W / 4. Bin counts are divided by the interference-free baseline of
/// the open slits, then smoothed by a least-squares fit of
/// A + C cos(2 pi x / P) + D sin(2 pi x / P) with P = lambda L / d.
/// Returns min(1, hypot(C, D) / A).
double visibility(std::span<const DetectionEvent> events, const SlitConfig &cfg,
                  std::size_t bin_count = 64);

/// Fringe geometry measured numerically from the intensity model.
struct FringeMeasurement {
  // Spacing of adjacent bright fringes of the interference term
  // intensity / (2 envelope), i.e. with the diffraction envelope divided out.
  double bright_spacing_m = 0.0;
  // Spacing of adjacent dark fringes of the raw intensity.
  double dark_spacing_m = 0.0;
  // Position of the first raw-intensity maximum right of centre; the
  // envelope pulls it inside lambda L / d.
  double first_raw_maximum_m = 0.0;
};

/// Locates fringe extrema on a dense grid and refines each by bisection on
/// the sign of the numerical derivative. Requires the coherent mode.
FringeMeasurement measure_fringes(const SlitConfig &cfg, std::size_t grid_points = 1 << 16);

enum class SourceMode { none, left_only, right_only, superposed, mixture };

struct SourceRepresentation {
  SourceMode mode = SourceMode::none;
  std::string state;  // ket form
  std::string system; // superposition-of-systems form
};

SourceRepresentation source_representation(const SlitConfig &cfg);
const char *to_string(SourceMode mode) noexcept;

} // namespace obsim::doubleslit

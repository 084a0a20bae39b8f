#include "obsim/doubleslit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include <Eigen/Dense>

#include "obsim/errors.hpp"

namespace obsim::doubleslit {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double sinc(double z) { return z == 0.0 ? 1.0 : std::sin(z) / z; }

double half_separation(const SlitConfig &cfg) { return 0.5 * cfg.separation_m; }

double geometric_period(const SlitConfig &cfg) {
  return cfg.wavelength_m * cfg.screen_distance_m / cfg.separation_m;
}

// Bisection on the sign of a central-difference derivative; [lo, hi] must
// bracket one extremum.
double refine_extremum(const std::function<double(double)> &f, double lo, double hi,
                       double h) {
  auto slope = [&](double x) { return f(x + h) - f(x - h); };
  const double s_lo = slope(lo);
  for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((slope(mid) > 0.0) == (s_lo > 0.0)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

std::vector<double> extrema(const std::function<double(double)> &f, double from, double to,
                            std::size_t points, bool maxima) {
  std::vector<double> xs(points);
  std::vector<double> fs(points);
  const double dx = (to - from) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i) {
    xs[i] = from + dx * static_cast<double>(i);
    fs[i] = maxima ? f(xs[i]) : -f(xs[i]);
  }
  std::vector<double> found;
  for (std::size_t i = 1; i + 1 < points; ++i) {
    if (fs[i] > fs[i - 1] && fs[i] >= fs[i + 1]) {
      found.push_back(refine_extremum(f, xs[i - 1], xs[i + 1], dx * 1e-3));
    }
  }
  return found;
}

double mean_gap(const std::vector<double> &sorted) {
  if (sorted.size() < 2) {
    throw DomainError("measure_fringes: fewer than two fringes on the screen");
  }
  return (sorted.back() - sorted.front()) / static_cast<double>(sorted.size() - 1);
}

} // namespace

void SlitConfig::validate() const {
  if (!positive_finite(slit_width_m)) {
    throw ConfigError("slit width must be positive");
  }
  if (!(std::isfinite(separation_m) && separation_m > slit_width_m)) {
    throw ConfigError("slit separation must exceed the slit width");
  }
  if (!positive_finite(wavelength_m) || !positive_finite(screen_distance_m) ||
      !positive_finite(screen_halfwidth_m)) {
    throw ConfigError("wavelength, screen distance and screen half-width must be positive");
  }
  if (!(std::isfinite(rate_per_s) && rate_per_s >= 0.0)) {
    throw ConfigError("source rate must be non-negative");
  }
}

double envelope(double u, const SlitConfig &cfg) {
  const double s = sinc(std::numbers::pi * cfg.slit_width_m * u /
                        (cfg.wavelength_m * cfg.screen_distance_m));
  return s * s;
}

double incoherent_baseline(double x, const SlitConfig &cfg) {
  const double h = half_separation(cfg);
  return (cfg.left_open ? envelope(x + h, cfg) : 0.0) +
         (cfg.right_open ? envelope(x - h, cfg) : 0.0);
}

double intensity(double x, const SlitConfig &cfg) {
  if (cfg.coherent_two_slit()) {
    const double c = std::cos(std::numbers::pi * cfg.separation_m * x /
                              (cfg.wavelength_m * cfg.screen_distance_m));
    return 4.0 * c * c * envelope(x, cfg);
  }
  return incoherent_baseline(x, cfg);
}

double fringe_spacing(const SlitConfig &cfg) {
  if (!cfg.coherent_two_slit()) {
    throw DomainError("fringe_spacing: needs both slits open without which-path detection");
  }
  return geometric_period(cfg);
}

PatternTable::PatternTable(const SlitConfig &cfg, std::size_t points) {
  cfg.validate();
  if (points < 2) {
    throw DomainError("PatternTable: need at least two grid points");
  }
  const double w = cfg.screen_halfwidth_m;
  const double dx = 2.0 * w / static_cast<double>(points - 1);
  x_.resize(points);
  intensity_.resize(points);
  cumulative_.resize(points);
  for (std::size_t i = 0; i < points; ++i) {
    x_[i] = i + 1 == points ? w : -w + dx * static_cast<double>(i);
    intensity_[i] = doubleslit::intensity(x_[i], cfg);
  }
  cumulative_[0] = 0.0;
  for (std::size_t i = 1; i < points; ++i) {
    cumulative_[i] =
        cumulative_[i - 1] + 0.5 * (intensity_[i] + intensity_[i - 1]) * (x_[i] - x_[i - 1]);
  }
  integral_ = cumulative_.back();
  if (!(integral_ > 0.0)) {
    return; // dark screen: tabulated but not sampleable
  }
  for (auto &c : cumulative_) {
    c /= integral_;
  }
  cumulative_.back() = 1.0;
}

double PatternTable::cdf(double x) const {
  if (!(integral_ > 0.0)) {
    throw DomainError("PatternTable: no intensity on the screen");
  }
  if (x <= x_.front()) {
    return 0.0;
  }
  if (x >= x_.back()) {
    return 1.0;
  }
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const auto i = static_cast<std::size_t>(it - x_.begin());
  const double t = (x - x_[i - 1]) / (x_[i] - x_[i - 1]);
  return cumulative_[i - 1] + t * (cumulative_[i] - cumulative_[i - 1]);
}

double PatternTable::inverse_cdf(double u) const {
  if (!(integral_ > 0.0)) {
    throw DomainError("PatternTable: no intensity on the screen to sample");
  }
  u = std::clamp(u, 0.0, 1.0);
  auto it = std::lower_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.begin()) {
    return x_.front();
  }
  const auto i = static_cast<std::size_t>(it - cumulative_.begin());
  const double span = cumulative_[i] - cumulative_[i - 1];
  const double t = span > 0.0 ? (u - cumulative_[i - 1]) / span : 0.0;
  return x_[i - 1] + t * (x_[i] - x_[i - 1]);
}

EventSampler::EventSampler(const SlitConfig &cfg, std::uint64_t seed) : rng_(seed) {
  reconfigure(cfg);
}

void EventSampler::reconfigure(const SlitConfig &cfg) {
  cfg.validate();
  cfg_ = cfg;
  table_ = cfg.any_open() ? std::make_shared<const PatternTable>(cfg) : nullptr;
}

std::vector<DetectionEvent> EventSampler::draw(std::size_t count) {
  if (count == 0) {
    return {};
  }
  if (!table_) {
    throw DomainError("sample_events: both slits are closed, nothing reaches the screen");
  }
  const double w = cfg_.screen_halfwidth_m;
  std::vector<DetectionEvent> events;
  events.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double x = table_->inverse_cdf(rng_.uniform01());
    const double y = -w + 2.0 * w * rng_.uniform01();
    events.push_back({x, y, next_tick_++});
  }
  return events;
}

std::vector<DetectionEvent> sample_events(const SlitConfig &cfg, std::size_t count,
                                          std::uint64_t seed) {
  cfg.validate();
  if (count == 0) {
    return {};
  }
  return EventSampler(cfg, seed).draw(count);
}

std::int64_t events_due(double rate_per_s, double elapsed_s) {
  if (rate_per_s <= 0.0 || elapsed_s <= 0.0) {
    return 0;
  }
  // The epsilon absorbs rounding in rate * elapsed for exact products.
  return static_cast<std::int64_t>(std::floor(rate_per_s * elapsed_s + 1e-9));
}

double visibility(std::span<const DetectionEvent> events, const SlitConfig &cfg,
                  std::size_t bin_count) {
  cfg.validate();
  if (events.size() < kMinVisibilityEvents) {
    throw DomainError("visibility: needs at least 10^4 events");
  }
  if (bin_count < 16) {
    throw DomainError("visibility: needs at least 16 bins");
  }
  if (!cfg.any_open()) {
    throw DomainError("visibility: both slits are closed");
  }
  const double period = geometric_period(cfg);
  const double w = cfg.screen_halfwidth_m;
  const double region =
      std::min(w, cfg.left_open && cfg.right_open ? 2.0 * period : 0.25 * w);

  std::vector<double> counts(bin_count, 0.0);
  const double width = 2.0 * region / static_cast<double>(bin_count);
  for (const auto &e : events) {
    if (std::fabs(e.x_m) > region) {
      continue;
    }
    auto bin = static_cast<std::size_t>((e.x_m + region) / width);
    counts[std::min(bin, bin_count - 1)] += 1.0;
  }

  Eigen::MatrixXd design(static_cast<Eigen::Index>(bin_count), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(bin_count));
  Eigen::Index rows = 0;
  for (std::size_t b = 0; b < bin_count; ++b) {
    const double centre = -region + width * (static_cast<double>(b) + 0.5);
    const double base = incoherent_baseline(centre, cfg);
    if (!(base > 1e-12)) {
      continue;
    }
    const double phase = 2.0 * std::numbers::pi * centre / period;
    design.row(rows) << 1.0, std::cos(phase), std::sin(phase);
    y(rows) = counts[b] / base;
    ++rows;
  }
  if (rows < 3) {
    throw DomainError("visibility: central region has too few usable bins");
  }
  const Eigen::Vector3d fit =
      design.topRows(rows).colPivHouseholderQr().solve(y.head(rows));
  if (!(fit(0) > 0.0)) {
    return 0.0;
  }
  return std::min(1.0, std::hypot(fit(1), fit(2)) / fit(0));
}

FringeMeasurement measure_fringes(const SlitConfig &cfg, std::size_t grid_points) {
  cfg.validate();
  if (!cfg.coherent_two_slit()) {
    throw DomainError("measure_fringes: needs the coherent two-slit mode");
  }
  // Stay inside the central diffraction lobe so envelope zeros are excluded.
  const double lobe = cfg.wavelength_m * cfg.screen_distance_m / cfg.slit_width_m;
  const double reach = std::min(cfg.screen_halfwidth_m, 0.9 * lobe);

  auto raw = [&](double x) { return intensity(x, cfg); };
  auto fringe = [&](double x) { return intensity(x, cfg) / (2.0 * envelope(x, cfg)); };

  FringeMeasurement m;
  const auto bright = extrema(fringe, -reach, reach, grid_points, true);
  const auto dark = extrema(raw, -reach, reach, grid_points, false);
  m.bright_spacing_m = mean_gap(bright);
  m.dark_spacing_m = mean_gap(dark);

  const auto raw_peaks = extrema(raw, -reach, reach, grid_points, true);
  const auto first = std::find_if(raw_peaks.begin(), raw_peaks.end(),
                                  [&](double x) { return x > 0.25 * geometric_period(cfg); });
  if (first != raw_peaks.end()) {
    m.first_raw_maximum_m = *first;
  }
  return m;
}

SourceRepresentation source_representation(const SlitConfig &cfg) {
  if (cfg.left_open && cfg.right_open) {
    if (cfg.which_path) {
      return {SourceMode::mixture, "½|l⟩⟨l| + ½|r⟩⟨r|", "S₃ₗ or S₃ᵣ, resolved per event"};
    }
    return {SourceMode::superposed, "(1/√2)(|l⟩ + |r⟩)", "(1/√2)(S₃ₗ + S₃ᵣ)"};
  }
  if (cfg.left_open) {
    return {SourceMode::left_only, "|l⟩", "S₃ₗ"};
  }
  if (cfg.right_open) {
    return {SourceMode::right_only, "|r⟩", "S₃ᵣ"};
  }
  return {SourceMode::none, "", ""};
}

const char *to_string(SourceMode mode) noexcept {
  switch (mode) {
  case SourceMode::none: return "none";
  case SourceMode::left_only: return "left-only";
  case SourceMode::right_only: return "right-only";
  case SourceMode::superposed: return "superposed";
  case SourceMode::mixture: return "mixture";
  }
  return "none";
}

} // namespace obsim::doubleslit

#include "obsim/worldmodel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace obsim {

void MeterStick::validate() const {
  if (!(std::isfinite(target_width_m) && target_width_m > 0.0)) {
    throw ConfigError("meter stick target width must be positive and finite");
  }
  if (!(std::isfinite(tolerance_m) && tolerance_m >= 0.0)) {
    throw ConfigError("meter stick tolerance must be non-negative and finite");
  }
}

WorldSpec::WorldSpec(std::vector<WorldObject> objects, MeterStick detector)
    : objects_(std::move(objects)), detector_(detector) {
  detector_.validate();
  if (objects_.empty()) {
    throw ConfigError("world has no objects");
  }
  std::vector<int> ids;
  ids.reserve(objects_.size());
  for (const auto &o : objects_) {
    if (!(std::isfinite(o.width_m) && o.width_m > 0.0)) {
      throw ConfigError("object " + std::to_string(o.id) +
                        ": width must be positive and finite");
    }
    ids.push_back(o.id);
    n_ += static_cast<std::size_t>(measure(detector_, o.width_m));
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    throw ConfigError("object ids must be unique");
  }
  m_ = objects_.size() - n_;
  if (n_ < 1 || m_ < 1) {
    throw ConfigError("world needs at least one matching and one non-matching object (n=" +
                      std::to_string(n_) + ", m=" + std::to_string(m_) + ")");
  }
}

std::size_t WorldSpec::index_of(int id) const {
  for (std::size_t i = 0; i < objects_.size(); ++i) {
    if (objects_[i].id == id) {
      return i;
    }
  }
  throw ContractViolation("no object with id " + std::to_string(id));
}

void PresentationSchedule::validate(std::size_t object_count) const {
  if (kind != ScheduleKind::cyclic || epoch_permutation.empty()) {
    return;
  }
  if (epoch_permutation.size() != object_count) {
    throw ConfigError("cyclic permutation length does not match the object count");
  }
  std::vector<bool> seen(object_count, false);
  for (auto i : epoch_permutation) {
    if (i >= object_count || seen[i]) {
      throw ConfigError("cyclic permutation is not a bijection on object indices");
    }
    seen[i] = true;
  }
}

Presenter::Presenter(const WorldSpec &spec, const PresentationSchedule &schedule)
    : spec_(&spec), schedule_(&schedule), rng_(schedule.seed) {
  schedule.validate(spec.size());
}

std::size_t Presenter::next_index() {
  const auto count = spec_->size();
  std::size_t index = 0;
  if (schedule_->kind == ScheduleKind::cyclic) {
    const auto slot = static_cast<std::size_t>(tick_ % static_cast<std::int64_t>(count));
    index = schedule_->epoch_permutation.empty() ? slot : schedule_->epoch_permutation[slot];
  } else {
    index = static_cast<std::size_t>(rng_.below(count));
  }
  ++tick_;
  return index;
}

int next_presentation(const WorldSpec &spec, const PresentationSchedule &schedule,
                      std::int64_t tick) {
  if (tick < 0) {
    throw ContractViolation("next_presentation: tick must be non-negative");
  }
  Presenter presenter(spec, schedule);
  if (schedule.kind == ScheduleKind::cyclic) {
    // Cyclic lookups need no replay.
    const auto slot = static_cast<std::size_t>(tick % static_cast<std::int64_t>(spec.size()));
    const auto index =
        schedule.epoch_permutation.empty() ? slot : schedule.epoch_permutation[slot];
    return spec.objects()[index].id;
  }
  int id = presenter.next();
  for (std::int64_t t = 0; t < tick; ++t) {
    id = presenter.next();
  }
  return id;
}

std::vector<int> reverse_window(const WorldSpec &spec, const PresentationSchedule &schedule,
                                std::int64_t t0, std::int64_t t1) {
  if (t0 < 0 || t1 <= t0) {
    throw ContractViolation("reverse_window: requires 0 <= t0 < t1");
  }
  Presenter presenter(spec, schedule);
  for (std::int64_t t = 0; t < t0; ++t) {
    presenter.next();
  }
  std::vector<int> window;
  window.reserve(static_cast<std::size_t>(t1 - t0));
  for (std::int64_t t = t0; t < t1; ++t) {
    window.push_back(presenter.next());
  }
  std::reverse(window.begin(), window.end());
  return window;
}

double BlockSums::total() const {
  ExactSum all;
  for (const auto &block : exact) {
    all.merge(block);
  }
  return all.value();
}

} // namespace obsim

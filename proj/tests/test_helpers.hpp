#pragma once

#include <vector>

#include "obsim/worldmodel.hpp"

namespace obsim::testing {

/// `matching` objects of width 1 m followed by `other` of width 2 m.
inline WorldSpec two_class_world(std::size_t matching, std::size_t other) {
  std::vector<WorldObject> objects;
  for (std::size_t i = 0; i < matching + other; ++i) {
    objects.push_back({static_cast<int>(i), i < matching ? 1.0 : 2.0});
  }
  return WorldSpec(std::move(objects));
}

inline PresentationSchedule uniform_schedule(std::uint64_t seed) {
  return {ScheduleKind::seeded_uniform, seed, {}};
}

} // namespace obsim::testing

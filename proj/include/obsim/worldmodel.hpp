#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "obsim/detector.hpp"
#include "obsim/errors.hpp"
#include "obsim/exact_sum.hpp"
#include "obsim/splitmix.hpp"

namespace obsim {

struct WorldObject {
  int id = 0;
  double width_m = 1.0;
};

/// God's-eye catalog of the world's objects, classified against a detector.
///
/// The matching count n and non-matching count m are computed from the
/// object list at construction and cannot be set independently.
class WorldSpec {
public:
  WorldSpec(std::vector<WorldObject> objects, MeterStick detector = {});

  const std::vector<WorldObject> &objects() const noexcept { return objects_; }
  const MeterStick &detector() const noexcept { return detector_; }
  std::size_t size() const noexcept { return objects_.size(); }
  std::size_t matching() const noexcept { return n_; }
  std::size_t non_matching() const noexcept { return m_; }

  /// Position of the object with the given id; throws ContractViolation.
  std::size_t index_of(int id) const;
  const WorldObject &object(int id) const { return objects_[index_of(id)]; }

private:
  std::vector<WorldObject> objects_;
  MeterStick detector_;
  std::size_t n_ = 0;
  std::size_t m_ = 0;
};

enum class ScheduleKind { cyclic, seeded_uniform };

struct PresentationSchedule {
  ScheduleKind kind = ScheduleKind::cyclic;
  std::uint64_t seed = 0;
  // Object indices; empty means the identity permutation.
  std::vector<std::size_t> epoch_permutation;

  /// Checks the permutation is a bijection on [0, object_count).
  void validate(std::size_t object_count) const;
};

/// Sequential reader of a presentation sequence; amortised O(1) per tick.
/// Holds references: spec and schedule must outlive the presenter.
class Presenter {
public:
  Presenter(const WorldSpec &spec, const PresentationSchedule &schedule);

  /// Object id presented at the next tick.
  int next() { return spec_->objects()[next_index()].id; }
  /// Position in spec.objects() of the object presented at the next tick.
  std::size_t next_index();
  std::int64_t tick() const noexcept { return tick_; }

private:
  const WorldSpec *spec_;
  const PresentationSchedule *schedule_;
  SplitMix64 rng_;
  std::int64_t tick_ = 0;
};

/// Object id presented at `tick`. A pure function of (spec, schedule, tick);
/// seeded-uniform schedules replay the stream from tick 0.
int next_presentation(const WorldSpec &spec, const PresentationSchedule &schedule,
                      std::int64_t tick);

/// Presentation ids over [t0, t1), in reverse order.
std::vector<int> reverse_window(const WorldSpec &spec,
                                const PresentationSchedule &schedule,
                                std::int64_t t0, std::int64_t t1);

template <class T> std::vector<T> reversed(std::span<const T> xs) {
  return {xs.rbegin(), xs.rend()};
}

enum class Part : std::uint8_t { S = 0, E = 1, O = 2 };

using PartitionLabeling = std::vector<Part>;
using GeneratorMatrix = Eigen::MatrixXd;

/// Block sums of a pairwise generator under an S/E/O partition.
///
/// Each block is accumulated exactly, so total() is the correctly rounded
/// sum of all generator entries whatever labeling produced the blocks.
struct BlockSums {
  double H_S = 0, H_E = 0, H_O = 0;
  double H_SE = 0, H_SO = 0, H_EO = 0;
  double H_SEO = 0; // identically zero for a pairwise generator

  double total() const;

  std::array<ExactSum, 7> exact;
};

namespace detail {
// 0..2 diagonal blocks, 3 SE, 4 SO, 5 EO.
constexpr int block_index(Part a, Part b) noexcept {
  if (a == b) {
    return static_cast<int>(a);
  }
  const int lo = std::min(static_cast<int>(a), static_cast<int>(b));
  const int hi = std::max(static_cast<int>(a), static_cast<int>(b));
  return lo == 0 ? (hi == 1 ? 3 : 4) : 5;
}
} // namespace detail

/// Sums generator entries by block, visiting (row, column) in ascending
/// row-major order.
template <class Derived>
BlockSums decompose(const Eigen::MatrixBase<Derived> &g, const PartitionLabeling &labels) {
  if (g.rows() != g.cols() || g.rows() < 1) {
    throw ContractViolation("decompose: generator must be square with dim >= 1");
  }
  if (static_cast<Eigen::Index>(labels.size()) != g.rows()) {
    throw ContractViolation("decompose: labeling does not cover the generator's indices");
  }
  BlockSums out;
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) {
      const double v = static_cast<double>(g(i, j));
      if (!std::isfinite(v)) {
        throw ContractViolation("decompose: generator entries must be finite");
      }
      out.exact[detail::block_index(labels[i], labels[j])].add(v);
    }
  }
  out.H_S = out.exact[0].value();
  out.H_E = out.exact[1].value();
  out.H_O = out.exact[2].value();
  out.H_SE = out.exact[3].value();
  out.H_SO = out.exact[4].value();
  out.H_EO = out.exact[5].value();
  out.H_SEO = out.exact[6].value();
  return out;
}

} // namespace obsim

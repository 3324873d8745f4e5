#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "point_set.hpp"

namespace alab {

/// Per-level occupied dyadic cells of a root cube.
///
/// Cells at level m have side root_side * 2^-m and are addressed by the
/// bit-interleaved (Morton) code of their integer lattice coordinates, so
/// the children of cell c are exactly the codes in [c << n, (c + 1) << n).
/// Each level is a sorted vector of codes. The source points are kept in
/// leaf-code order so that the points of any cell form a contiguous range.
///
/// Immutable after build; all queries are const and thread-safe.
class MultiScaleIndex {
 public:
  using Code = std::uint64_t;

  static MultiScaleIndex build(const PointSet& points, int max_level);

  /// Deepest level permitted by address arithmetic in dimension `dim`.
  static int level_cap(int dim) noexcept;
  /// Deepest level whose cell side is still >= the sample resolution.
  static int max_level_for(const PointSet& points);

  int dim() const noexcept { return dim_; }
  int max_level() const noexcept { return max_level_; }
  double resolution() const noexcept { return resolution_; }
  const Cube& root() const noexcept { return root_; }
  double root_side() const noexcept { return 2.0 * root_.radius; }
  double root_diameter() const;
  double cell_side(int level) const;

  std::size_t occupied_count(int level) const;
  std::span<const Code> cells(int level) const;

  std::size_t point_count() const noexcept { return leaf_codes_.size(); }
  std::span<const double> point(std::size_t i) const {
    return {points_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }

  /// Index (into point()) of the first stored point of an occupied cell.
  std::size_t first_point_in_cell(int level, Code code) const;

  /// Up to k cells at `level` holding the most occupied descendants at
  /// level `finer`, most populated first (ties toward smaller codes).
  std::vector<Code> densest_cells(int level, int finer, std::size_t k) const;

  /// Occupied descendants of a cell at level `finer`.
  std::size_t descendant_count(int level, Code code, int finer) const;

  /// Integer lattice coordinates of a cell.
  std::vector<std::int64_t> cell_coords(int level, Code code) const;

  /// Level l whose side s satisfies s <= side < 2s. May be larger than
  /// max_level(); callers check.
  int snap_level(double side) const;

  /// Number of cells at `level` that contain at least one sample point of
  /// the closed ball B(x, radius). No precondition checks beyond the level.
  std::size_t count_in_ball(std::span<const double> x, double radius, int level) const;

  /// Number of occupied cells at `level` whose centers lie in the closed
  /// ball B(x, radius).
  std::size_t count_centers_in_ball(std::span<const double> x, double radius, int level) const;

  /// Ball-local dyadic count: decomposing Q(x, radius) m times gives cubes
  /// of side 2^-m * 2 * radius; the query runs on the global grid at the
  /// snapped level for that side.
  std::size_t local_dyadic_count(std::span<const double> x, double radius, int m) const;

 private:
  using Coords = std::array<std::int64_t, kMaxDim>;

  bool intersects(const Coords& c, int level, std::span<const double> x, double r2) const;
  bool inside(const Coords& c, int level, std::span<const double> x, double r2) const;
  void count_rec(int level, Code code, const Coords& c, int target,
                 std::span<const double> x, double r2, bool centers, std::size_t& count) const;
  bool center_inside(const Coords& c, int level, std::span<const double> x, double r2) const;
  bool any_point_in_ball(int level, Code code, const Coords& c,
                         std::span<const double> x, double r2) const;

  int dim_ = 0;
  int max_level_ = 0;
  double resolution_ = 0.0;
  Cube root_;
  std::vector<double> lo_;
  std::vector<std::vector<Code>> levels_;
  std::vector<Code> leaf_codes_;
  std::vector<double> points_;
};

}  // namespace alab

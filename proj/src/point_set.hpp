#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace alab {

inline constexpr int kMaxDim = 8;

/// Finite sample of a subset of R^n.
///
/// Coordinates are stored row-major. `resolution` is the producer's
/// guarantee that every point of the intended set lies within
/// resolution/2 of some sample point. Samples of parameterised curves may
/// carry one curve parameter per point (NaN where a point is not on the
/// parameterised part, e.g. a closure point).
class PointSet {
 public:
  PointSet() = default;
  PointSet(int dim, double resolution, std::vector<double> coords,
           std::vector<double> params = {});

  static PointSet empty(int dim, double resolution);

  int dim() const noexcept { return dim_; }
  double resolution() const noexcept { return resolution_; }
  std::size_t size() const noexcept { return dim_ ? coords_.size() / dim_ : 0; }
  bool is_empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> coords() const noexcept { return coords_; }

  bool has_params() const noexcept { return !params_.empty(); }
  std::span<const double> params() const noexcept { return params_; }

  /// Largest radial-stretch dilatation under whose image this sample stays
  /// dense at `resolution` (1 when no such guarantee was made).
  double stretch_grade() const noexcept { return stretch_grade_; }
  void set_stretch_grade(double k);

  bool operator==(const PointSet& other) const;

 private:
  int dim_ = 0;
  double resolution_ = 0.0;
  std::vector<double> coords_;
  std::vector<double> params_;
  double stretch_grade_ = 1.0;
};

/// Union of two samples in the same ambient space; resolution is the
/// coarser of the two.
PointSet merge(const PointSet& a, const PointSet& b);

struct Cube {
  std::vector<double> center;
  double radius = 0.0;  // half side length
};

struct Ball {
  std::vector<double> center;
  double radius = 0.0;
};

}  // namespace alab

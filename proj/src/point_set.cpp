#include "point_set.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "errors.hpp"

namespace alab {

PointSet::PointSet(int dim, double resolution, std::vector<double> coords,
                   std::vector<double> params)
    : dim_(dim), resolution_(resolution), coords_(std::move(coords)),
      params_(std::move(params)) {
  if (dim_ < 1 || dim_ > kMaxDim) {
    fail(ErrorCode::InvalidArgument,
         "dimension must be in 1.." + std::to_string(kMaxDim) + ", got " +
             std::to_string(dim_));
  }
  if (!(resolution_ > 0.0) || !std::isfinite(resolution_)) {
    fail(ErrorCode::InvalidArgument, "resolution must be positive and finite");
  }
  if (coords_.size() % dim_ != 0) {
    fail(ErrorCode::InvalidArgument,
         "coordinate count is not a multiple of the dimension");
  }
  for (double c : coords_) {
    if (!std::isfinite(c)) fail(ErrorCode::InvalidArgument, "non-finite coordinate");
  }
  if (!params_.empty() && params_.size() != size()) {
    fail(ErrorCode::InvalidArgument, "parameter count does not match point count");
  }
}

PointSet PointSet::empty(int dim, double resolution) {
  return PointSet(dim, resolution, {});
}

void PointSet::set_stretch_grade(double k) {
  if (!(k >= 1.0) || !std::isfinite(k)) {
    fail(ErrorCode::InvalidArgument, "stretch grade must be >= 1");
  }
  stretch_grade_ = k;
}

bool PointSet::operator==(const PointSet& other) const {
  if (dim_ != other.dim_ || resolution_ != other.resolution_ ||
      coords_ != other.coords_ || stretch_grade_ != other.stretch_grade_ ||
      params_.size() != other.params_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const double a = params_[i], b = other.params_[i];
    if (!(a == b || (std::isnan(a) && std::isnan(b)))) return false;
  }
  return true;
}

PointSet merge(const PointSet& a, const PointSet& b) {
  if (a.dim() != b.dim()) fail(ErrorCode::DimensionMismatch, "cannot merge point sets of different dimension");
  std::vector<double> coords(a.coords().begin(), a.coords().end());
  coords.insert(coords.end(), b.coords().begin(), b.coords().end());
  std::vector<double> params;
  if (a.has_params() || b.has_params()) {
    params.assign(a.size() + b.size(), std::nan(""));
    if (a.has_params()) std::copy(a.params().begin(), a.params().end(), params.begin());
    if (b.has_params()) std::copy(b.params().begin(), b.params().end(), params.begin() + a.size());
  }
  return PointSet(a.dim(), std::max(a.resolution(), b.resolution()), std::move(coords),
                  std::move(params));
}

}  // namespace alab

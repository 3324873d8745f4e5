#include "multiscale_index.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "errors.hpp"

namespace alab {

namespace {

using Code = MultiScaleIndex::Code;

Code interleave(const std::int64_t* c, int dim, int level) {
  Code code = 0;
  for (int b = 0; b < level; ++b) {
    for (int d = 0; d < dim; ++d) {
      code |= static_cast<Code>((c[d] >> b) & 1) << (b * dim + d);
    }
  }
  return code;
}

}  // namespace

int MultiScaleIndex::level_cap(int dim) noexcept {
  return std::min(52, 62 / std::max(dim, 1));
}

namespace {

double bbox_side(const PointSet& points, std::vector<double>& mid) {
  const int n = points.dim();
  std::vector<double> lo(n, INFINITY), hi(n, -INFINITY);
  for (std::size_t i = 0; i < points.size(); ++i) {
    auto p = points.point(i);
    for (int d = 0; d < n; ++d) {
      lo[d] = std::min(lo[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  double side = 0.0;
  mid.assign(n, 0.0);
  for (int d = 0; d < n; ++d) {
    side = std::max(side, hi[d] - lo[d]);
    mid[d] = 0.5 * (lo[d] + hi[d]);
  }
  return side;
}

}  // namespace

int MultiScaleIndex::max_level_for(const PointSet& points) {
  if (points.is_empty()) fail(ErrorCode::EmptySet, "point set is empty");
  std::vector<double> mid;
  const double side = bbox_side(points, mid);
  const int cap = level_cap(points.dim());
  // A set narrower than its resolution has no intrinsic scale; any depth works.
  if (side < points.resolution()) return std::min(cap, 10);
  int m = 0;
  while (m < cap && std::ldexp(side, -(m + 1)) >= points.resolution()) ++m;
  return m;
}

MultiScaleIndex MultiScaleIndex::build(const PointSet& points, int max_level) {
  if (points.is_empty()) fail(ErrorCode::EmptySet, "point set is empty");
  const int n = points.dim();
  if (max_level < 0 || max_level > level_cap(n)) {
    fail(ErrorCode::LevelOutOfRange, "maxLevel " + std::to_string(max_level) +
                                         " outside 0.." + std::to_string(level_cap(n)) +
                                         " for dimension " + std::to_string(n));
  }

  MultiScaleIndex idx;
  idx.dim_ = n;
  idx.max_level_ = max_level;
  idx.resolution_ = points.resolution();

  std::vector<double> mid;
  double side = bbox_side(points, mid);
  if (side < points.resolution()) side = std::ldexp(points.resolution(), max_level);
  idx.root_ = Cube{mid, 0.5 * side};
  if (std::ldexp(side, -max_level) < points.resolution() * (1.0 - 1e-12)) {
    fail(ErrorCode::ResolutionExceeded,
         "leaf side " + std::to_string(std::ldexp(side, -max_level)) +
             " is below the sample resolution " + std::to_string(points.resolution()));
  }
  idx.lo_.resize(n);
  for (int d = 0; d < n; ++d) idx.lo_[d] = mid[d] - 0.5 * side;

  const std::int64_t cells_per_axis = std::int64_t{1} << max_level;
  const double scale = std::ldexp(1.0, max_level) / side;
  const std::size_t count = points.size();
  std::vector<std::pair<Code, std::size_t>> keyed(count);
  std::int64_t c[kMaxDim];
  for (std::size_t i = 0; i < count; ++i) {
    auto p = points.point(i);
    for (int d = 0; d < n; ++d) {
      auto v = static_cast<std::int64_t>(std::floor((p[d] - idx.lo_[d]) * scale));
      c[d] = std::clamp<std::int64_t>(v, 0, cells_per_axis - 1);
    }
    keyed[i] = {interleave(c, n, max_level), i};
  }
  std::sort(keyed.begin(), keyed.end());

  idx.leaf_codes_.resize(count);
  idx.points_.resize(count * n);
  for (std::size_t i = 0; i < count; ++i) {
    idx.leaf_codes_[i] = keyed[i].first;
    auto p = points.point(keyed[i].second);
    std::copy(p.begin(), p.end(), idx.points_.begin() + i * n);
  }

  idx.levels_.resize(max_level + 1);
  auto& leaves = idx.levels_[max_level];
  leaves = idx.leaf_codes_;
  leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
  for (int m = max_level - 1; m >= 0; --m) {
    const auto& finer = idx.levels_[m + 1];
    auto& level = idx.levels_[m];
    level.reserve(finer.size());
    for (Code code : finer) {
      Code parent = code >> n;
      if (level.empty() || level.back() != parent) level.push_back(parent);
    }
    level.shrink_to_fit();
  }
  return idx;
}

double MultiScaleIndex::root_diameter() const {
  return root_side() * std::sqrt(static_cast<double>(dim_));
}

double MultiScaleIndex::cell_side(int level) const {
  return std::ldexp(root_side(), -level);
}

std::size_t MultiScaleIndex::occupied_count(int level) const {
  if (level < 0 || level > max_level_) {
    fail(ErrorCode::LevelOutOfRange, "level " + std::to_string(level) + " outside 0.." +
                                         std::to_string(max_level_));
  }
  return levels_[level].size();
}

std::span<const MultiScaleIndex::Code> MultiScaleIndex::cells(int level) const {
  occupied_count(level);
  return levels_[level];
}

std::vector<std::int64_t> MultiScaleIndex::cell_coords(int level, Code code) const {
  std::vector<std::int64_t> c(dim_, 0);
  for (int b = 0; b < level; ++b) {
    for (int d = 0; d < dim_; ++d) {
      c[d] |= static_cast<std::int64_t>((code >> (b * dim_ + d)) & 1) << b;
    }
  }
  return c;
}

std::size_t MultiScaleIndex::first_point_in_cell(int level, Code code) const {
  const int shift = dim_ * (max_level_ - level);
  auto it = std::lower_bound(leaf_codes_.begin(), leaf_codes_.end(), code << shift);
  if (it == leaf_codes_.end() || (*it >> shift) != code) {
    fail(ErrorCode::InvalidArgument, "cell is not occupied");
  }
  return static_cast<std::size_t>(it - leaf_codes_.begin());
}

std::size_t MultiScaleIndex::descendant_count(int level, Code code, int finer) const {
  const int shift = dim_ * (finer - level);
  const auto& t = levels_[finer];
  auto first = std::lower_bound(t.begin(), t.end(), code << shift);
  auto last = std::lower_bound(first, t.end(), (code + 1) << shift);
  return static_cast<std::size_t>(last - first);
}

std::vector<MultiScaleIndex::Code> MultiScaleIndex::densest_cells(int level, int finer,
                                                                  std::size_t k) const {
  if (level < 0 || finer < level || finer > max_level_) {
    fail(ErrorCode::LevelOutOfRange, "densest_cells needs 0 <= level <= finer <= maxLevel");
  }
  if (k == 0) return {};
  const int shift = dim_ * (finer - level);
  std::vector<std::pair<std::size_t, Code>> best;  // (count, code), kept sorted best first
  auto offer = [&](Code code, std::size_t count) {
    if (best.size() == k && count <= best.back().first) return;
    auto pos = std::find_if(best.begin(), best.end(), [&](const auto& e) { return e.first < count; });
    best.insert(pos, {count, code});
    if (best.size() > k) best.pop_back();
  };
  const auto& t = levels_[finer];
  std::size_t run = 0;
  Code current = 0;
  for (Code c : t) {
    const Code parent = c >> shift;
    if (run > 0 && parent != current) {
      offer(current, run);
      run = 0;
    }
    current = parent;
    ++run;
  }
  if (run > 0) offer(current, run);
  std::vector<Code> out;
  for (const auto& e : best) out.push_back(e.second);
  return out;
}

int MultiScaleIndex::snap_level(double side) const {
  int level = 0;
  double s = root_side();
  while (s > side && level < 1100) {
    s *= 0.5;
    ++level;
  }
  return level;
}

bool MultiScaleIndex::intersects(const Coords& c, int level, std::span<const double> x,
                                 double r2) const {
  const double s = cell_side(level);
  double d2 = 0.0;
  for (int d = 0; d < dim_; ++d) {
    const double lo = lo_[d] + static_cast<double>(c[d]) * s;
    const double hi = lo + s;
    const double gap = x[d] < lo ? lo - x[d] : (x[d] > hi ? x[d] - hi : 0.0);
    d2 += gap * gap;
  }
  return d2 <= r2;
}

bool MultiScaleIndex::inside(const Coords& c, int level, std::span<const double> x,
                             double r2) const {
  const double s = cell_side(level);
  double d2 = 0.0;
  for (int d = 0; d < dim_; ++d) {
    const double lo = lo_[d] + static_cast<double>(c[d]) * s;
    const double far = std::max(std::abs(x[d] - lo), std::abs(x[d] - lo - s));
    d2 += far * far;
  }
  return d2 <= r2;
}

bool MultiScaleIndex::any_point_in_ball(int level, Code code, const Coords& c,
                                        std::span<const double> x, double r2) const {
  if (inside(c, level, x, r2)) return true;
  if (level == max_level_) {
    auto [first, last] = std::equal_range(leaf_codes_.begin(), leaf_codes_.end(), code);
    for (auto it = first; it != last; ++it) {
      auto p = point(static_cast<std::size_t>(it - leaf_codes_.begin()));
      double d2 = 0.0;
      for (int d = 0; d < dim_; ++d) d2 += (p[d] - x[d]) * (p[d] - x[d]);
      if (d2 <= r2) return true;
    }
    return false;
  }
  const auto& finer = levels_[level + 1];
  const Code mask = (Code{1} << dim_) - 1;
  for (auto it = std::lower_bound(finer.begin(), finer.end(), code << dim_);
       it != finer.end() && (*it >> dim_) == code; ++it) {
    Coords child{};
    for (int d = 0; d < dim_; ++d) child[d] = 2 * c[d] + static_cast<std::int64_t>(((*it & mask) >> d) & 1);
    if (intersects(child, level + 1, x, r2) && any_point_in_ball(level + 1, *it, child, x, r2)) {
      return true;
    }
  }
  return false;
}

void MultiScaleIndex::count_rec(int level, Code code, const Coords& c, int target,
                                std::span<const double> x, double r2, bool centers,
                                std::size_t& count) const {
  if (!intersects(c, level, x, r2)) return;
  if (level == target) {
    if (centers ? center_inside(c, level, x, r2) : any_point_in_ball(level, code, c, x, r2)) ++count;
    return;
  }
  if (inside(c, level, x, r2)) {
    const int shift = dim_ * (target - level);
    const auto& t = levels_[target];
    auto first = std::lower_bound(t.begin(), t.end(), code << shift);
    auto last = std::lower_bound(first, t.end(), (code + 1) << shift);
    count += static_cast<std::size_t>(last - first);
    return;
  }
  const auto& finer = levels_[level + 1];
  const Code mask = (Code{1} << dim_) - 1;
  for (auto it = std::lower_bound(finer.begin(), finer.end(), code << dim_);
       it != finer.end() && (*it >> dim_) == code; ++it) {
    Coords child{};
    for (int d = 0; d < dim_; ++d) child[d] = 2 * c[d] + static_cast<std::int64_t>(((*it & mask) >> d) & 1);
    count_rec(level + 1, *it, child, target, x, r2, centers, count);
  }
}

std::size_t MultiScaleIndex::count_in_ball(std::span<const double> x, double radius,
                                           int level) const {
  if (level < 0 || level > max_level_) {
    fail(ErrorCode::LevelOutOfRange, "level " + std::to_string(level) + " outside 0.." +
                                         std::to_string(max_level_));
  }
  std::size_t count = 0;
  count_rec(0, 0, Coords{}, level, x, radius * radius, false, count);
  return count;
}

bool MultiScaleIndex::center_inside(const Coords& c, int level, std::span<const double> x,
                                    double r2) const {
  const double side = cell_side(level);
  double d2 = 0.0;
  for (int d = 0; d < dim_; ++d) {
    const double v = lo_[d] + (static_cast<double>(c[d]) + 0.5) * side - x[d];
    d2 += v * v;
  }
  return d2 <= r2;
}

std::size_t MultiScaleIndex::count_centers_in_ball(std::span<const double> x, double radius,
                                                   int level) const {
  if (level < 0 || level > max_level_) {
    fail(ErrorCode::LevelOutOfRange, "level " + std::to_string(level) + " outside 0.." +
                                         std::to_string(max_level_));
  }
  std::size_t count = 0;
  count_rec(0, 0, Coords{}, level, x, radius * radius, true, count);
  return count;
}

std::size_t MultiScaleIndex::local_dyadic_count(std::span<const double> x, double radius,
                                                int m) const {
  if (static_cast<int>(x.size()) != dim_) {
    fail(ErrorCode::DimensionMismatch, "query point has wrong dimension");
  }
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    fail(ErrorCode::InvalidArgument, "radius must be positive and finite");
  }
  if (radius > root_.radius * (1.0 + 1e-12)) {
    fail(ErrorCode::InvalidArgument, "radius exceeds the root half side");
  }
  for (int d = 0; d < dim_; ++d) {
    if (!std::isfinite(x[d]) || std::abs(x[d] - root_.center[d]) > root_.radius * (1.0 + 1e-12)) {
      fail(ErrorCode::InvalidArgument, "query center lies outside the root cube");
    }
  }
  if (m < 0) fail(ErrorCode::LevelOutOfRange, "m must be nonnegative");
  const double side = std::ldexp(2.0 * radius, -m);
  if (side < resolution_ * (1.0 - 1e-12)) {
    fail(ErrorCode::ScaleBelowResolution,
         "requested cell side " + std::to_string(side) + " is below the resolution " +
             std::to_string(resolution_));
  }
  const int level = snap_level(side);
  if (level > max_level_) {
    fail(ErrorCode::LevelOutOfRange, "snapped level " + std::to_string(level) +
                                         " exceeds maxLevel " + std::to_string(max_level_));
  }
  return count_in_ball(x, radius, level);
}

}  // namespace alab

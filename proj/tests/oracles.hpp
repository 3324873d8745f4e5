#pragma once

// Brute-force reference computations. Nothing here calls into the index or
// the estimators; they only share the point set type.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "point_set.hpp"

namespace oracle {

using Cell = std::vector<std::int64_t>;

inline Cell bucket(std::span<const double> p, std::span<const double> lo, double side,
                   std::int64_t per_axis) {
  Cell c(p.size());
  for (std::size_t d = 0; d < p.size(); ++d) {
    auto v = static_cast<std::int64_t>(std::floor((p[d] - lo[d]) / side));
    c[d] = std::clamp<std::int64_t>(v, 0, per_axis - 1);
  }
  return c;
}

inline double dist2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += (a[d] - b[d]) * (a[d] - b[d]);
  return s;
}

// Occupied cells of the level-m grid on the cube [lo, lo + root_side]^n.
inline std::size_t grid_count(const alab::PointSet& f, std::span<const double> lo,
                              double root_side, int m) {
  const std::int64_t per_axis = std::int64_t{1} << m;
  const double side = std::ldexp(root_side, -m);
  std::set<Cell> cells;
  for (std::size_t i = 0; i < f.size(); ++i) cells.insert(bucket(f.point(i), lo, side, per_axis));
  return cells.size();
}

// Global-grid cells at level m holding a sample point of the closed ball.
inline std::size_t ball_grid_count(const alab::PointSet& f, std::span<const double> lo,
                                   double root_side, int m, std::span<const double> x,
                                   double radius) {
  const std::int64_t per_axis = std::int64_t{1} << m;
  const double side = std::ldexp(root_side, -m);
  std::set<Cell> cells;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (dist2(f.point(i), x) <= radius * radius) cells.insert(bucket(f.point(i), lo, side, per_axis));
  }
  return cells.size();
}

// Cubes of the m-th dyadic subdivision of Q(x, R) (the cube of side 2R
// centred at x) that hold a sample point of B(x, R).
inline std::size_t centered_dyadic_count(const alab::PointSet& f, std::span<const double> x,
                                         double radius, int m) {
  const std::int64_t per_axis = std::int64_t{1} << m;
  const double side = std::ldexp(2.0 * radius, -m);
  std::vector<double> lo(x.begin(), x.end());
  for (double& v : lo) v -= radius;
  std::set<Cell> cells;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (dist2(f.point(i), x) <= radius * radius) cells.insert(bucket(f.point(i), lo, side, per_axis));
  }
  return cells.size();
}

// Level-k construction intervals of the middle-thirds set that contain a
// sample point, found by walking the construction rather than by bucketing.
inline std::size_t cantor_intervals_hit(std::span<const double> xs, int k) {
  std::vector<double> starts{0.0};
  double len = 1.0;
  for (int j = 0; j < k; ++j) {
    len /= 3.0;
    std::vector<double> next;
    next.reserve(starts.size() * 2);
    for (double a : starts) {
      next.push_back(a);
      next.push_back(a + 2.0 * len);
    }
    starts.swap(next);
  }
  std::size_t hit = 0;
  for (double a : starts) {
    const double tol = 1e-12;
    if (std::any_of(xs.begin(), xs.end(), [&](double x) { return x >= a - tol && x <= a + len + tol; })) ++hit;
  }
  return hit;
}

// Cells of side 2^-k in [0, 1] hit by the analytic set {0} u {m^-p : m >= 1}.
// Once consecutive points are closer than the side, every cell down to 0 is hit.
inline std::size_t sequence_grid_count(double p, int k) {
  const double side = std::ldexp(1.0, -k);
  std::set<std::int64_t> cells;
  std::int64_t m = 1;
  for (;; ++m) {
    const double x = std::pow(static_cast<double>(m), -p);
    const double gap = x - std::pow(static_cast<double>(m + 1), -p);
    cells.insert(std::min<std::int64_t>(static_cast<std::int64_t>(std::floor(x / side)), (std::int64_t{1} << k) - 1));
    if (gap < side) break;
  }
  const double tail = std::pow(static_cast<double>(m + 1), -p);
  const auto top = static_cast<std::int64_t>(std::floor(tail / side));
  for (std::int64_t c = 0; c <= top; ++c) cells.insert(c);
  return cells.size();
}

inline double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Random clustered or uniform cloud in [0,1]^n with a declared resolution
// fine enough for the requested depth.
inline alab::PointSet random_cloud(std::mt19937_64& rng, int n, std::size_t count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(count * n);
  const bool clustered = u(rng) < 0.5;
  std::vector<double> hub(n);
  for (double& h : hub) h = u(rng);
  const double spread = 0.01 + 0.2 * u(rng);
  for (std::size_t i = 0; i < count; ++i) {
    for (int d = 0; d < n; ++d) {
      double v = clustered ? hub[d] + spread * (u(rng) - 0.5) * std::pow(u(rng), 3.0) : u(rng);
      coords[i * n + d] = std::clamp(v, 0.0, 1.0);
    }
  }
  return alab::PointSet(n, 1e-6, std::move(coords));
}

}  // namespace oracle

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"
#include "estimators.hpp"
#include "families.hpp"
#include "multiscale_index.hpp"
#include "oracles.hpp"

using namespace alab;

namespace {

const double kCantorDim = std::log(2.0) / std::log(3.0);

MultiScaleIndex index_of(const PointSet& f) {
  return MultiScaleIndex::build(f, MultiScaleIndex::max_level_for(f));
}

PointSet dense_square(double res) {
  std::vector<double> c;
  const int n = static_cast<int>(std::round(1.0 / res));
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      c.push_back(i * res);
      c.push_back(j * res);
    }
  }
  return PointSet(2, res, std::move(c));
}

PointSet spiral(double a, double res) {
  FamilySpec s{FamilyKind::PolySpiral, a, spiral_min_xmax(FamilyKind::PolySpiral, a, res), res};
  return sample_family(s);
}

}  // namespace

TEST_CASE("single point gives zero everywhere") {
  PointSet f(2, 1e-3, {0.3, 0.4});
  auto idx = MultiScaleIndex::build(f, 6);
  ScaleWindow w{1e-3, idx.root_side()};
  CHECK(estimate_box_dim(idx, w).value == 0.0);
  CHECK(estimate_assouad(idx, w).value == 0.0);
  CHECK(estimate_quasi_assouad(idx, w).value == 0.0);
  auto g = theta_grid(0.05, 0.9, 0.05);
  auto sp = estimate_spectrum(idx, g, w);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (sp.values[i]) CHECK(*sp.values[i] == 0.0);
  }
  CHECK(estimate_rho(sp, 2, 0.05) == doctest::Approx(g.front()));
}

TEST_CASE("dense square is two dimensional") {
  auto f = dense_square(1.0 / 512);
  auto idx = index_of(f);
  auto w = default_window(idx);
  CHECK(estimate_box_dim(idx, w).value == doctest::Approx(2.0).epsilon(0.025));
  CHECK(estimate_assouad(idx, w).value == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("cantor depth 10") {
  auto f = sample_family({FamilyKind::Cantor, 1.0 / 3.0, 10});
  auto idx = index_of(f);
  auto w = default_window(idx);
  CHECK(std::abs(estimate_box_dim(idx, w).value - kCantorDim) <= 0.05);
  CHECK(std::abs(estimate_quasi_assouad(idx, w).value - kCantorDim) <= 0.08);

  // Exact construction counts give the same slope at triadic scales.
  std::vector<double> x, y;
  for (int k = 2; k <= 10; ++k) {
    x.push_back(k * std::log(3.0));
    y.push_back(std::log(static_cast<double>(oracle::cantor_intervals_hit(f.coords(), k))));
  }
  CHECK(oracle::slope(x, y) == doctest::Approx(kCantorDim).epsilon(1e-9));
}

TEST_CASE("spectrum structural properties") {
  auto f = spiral(1.0, 1e-3);
  auto idx = index_of(f);
  auto g = theta_grid(0.05, 0.9, 0.05);
  auto sp = estimate_spectrum(idx, g, default_window(idx));
  std::optional<double> prev;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!sp.regularized[i]) continue;
    CHECK(*sp.regularized[i] >= 0.0);
    CHECK(*sp.regularized[i] <= 2.0);
    if (sp.values[i]) CHECK(*sp.regularized[i] >= *sp.values[i]);
    if (prev) CHECK(*sp.regularized[i] >= *prev);
    prev = sp.regularized[i];
  }
}

TEST_CASE("spiral S_2 spectrum at theta 1/2") {
  auto f = spiral(2.0, 1e-6);
  auto idx = index_of(f);
  const std::vector<double> g{0.5};
  auto sp = estimate_spectrum(idx, g, default_window(idx));
  REQUIRE(sp.regularized[0]);
  CHECK(std::abs(*sp.values[0] - oracle_spiral_spectrum(2.0, 0.5)) <= 0.15);
}

TEST_CASE("spiral S_1/2 reaches full dimension at its phase transition") {
  auto f = spiral(0.5, 1e-3);
  auto idx = index_of(f);
  auto g = theta_grid(1.0 / 3.0, 1.0 / 3.0, 0.1);
  auto sp = estimate_spectrum(idx, g, default_window(idx));
  REQUIRE(sp.regularized[0]);
  CHECK(*sp.regularized[0] >= 2.0 - 0.15);
}

TEST_CASE("spiral S_1 quasi-Assouad dimension") {
  auto f = spiral(1.0, 1e-4);
  auto idx = index_of(f);
  CHECK(std::abs(estimate_quasi_assouad(idx, default_window(idx)).value - 2.0) <= 0.2);
}

TEST_CASE("sequence set Assouad dimension is close to one") {
  std::vector<double> c{0.0};
  for (int m = 1; m <= 10000; ++m) c.push_back(1.0 / m);
  PointSet f(1, 1e-8, std::move(c));
  auto idx = index_of(f);
  // At scale r the sample fills [1e-4, sqrt(r)] densely; the window keeps
  // every ball of the estimator inside that stretch.
  ScaleWindow w{1e-6, 1e-3};
  CHECK(estimate_assouad(idx, w).value >= 0.85);
}

TEST_CASE("rho on oracle spectra") {
  for (double a : {1.0, 2.0}) {
    SpectrumEstimate sp;
    sp.theta = theta_grid(0.01, 0.99, 0.01);
    for (double t : sp.theta) {
      const double v = oracle_spiral_spectrum(a, t);
      sp.values.push_back(v);
      sp.regularized.push_back(v);
      sp.percentile.push_back(v);
      sp.diagnostics.push_back(std::nullopt);
    }
    CHECK(std::abs(estimate_rho(sp, 2, 0.01) - oracle_spiral_rho(a)) <= 0.01 + 1e-9);
  }
}

TEST_CASE("window validation") {
  auto f = sample_family({FamilyKind::Cantor, 1.0 / 3.0, 6});
  auto idx = index_of(f);
  CHECK_THROWS_AS(validate_window(idx, {0.5 * f.resolution(), 0.25}), Error);
  CHECK_THROWS_AS(validate_window(idx, {0.1, 0.1}), Error);
  CHECK_THROWS_AS(validate_window(idx, {0.1, 2.0 * idx.root_diameter()}), Error);
  CHECK_THROWS_AS(estimate_box_dim(idx, {0.2, 0.21}), Error);
  CHECK_NOTHROW(validate_window(idx, default_window(idx)));
}

TEST_CASE("theta grid and line fit") {
  auto g = theta_grid(0.05, 0.9, 0.05);
  CHECK(g.size() == 18);
  CHECK(g.back() == doctest::Approx(0.9));
  std::vector<double> x{0, 1, 2, 3}, y{1, 3, 5, 7};
  auto [s, b] = fit_line(x, y);
  CHECK(s == doctest::Approx(2.0));
  CHECK(b == doctest::Approx(1.0));
}

TEST_CASE("farthest point centers are deterministic and distinct") {
  std::mt19937_64 rng(3);
  auto f = oracle::random_cloud(rng, 2, 500);
  auto idx = MultiScaleIndex::build(f, 6);
  auto a = farthest_point_centers(idx, 32);
  auto b = farthest_point_centers(idx, 32);
  CHECK(a == b);
  CHECK(a.size() == 32);
  std::sort(a.begin(), a.end());
  CHECK(std::unique(a.begin(), a.end()) == a.end());
}

#include <doctest.h>

#include <cmath>
#include <complex>

#include "errors.hpp"
#include "families.hpp"
#include "planar_map.hpp"

using namespace alab;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Largest residual between mapped spiral points and the S_b points with the
// same parameter.
double transport_residual(double a, double k, double res) {
  FamilySpec spec{FamilyKind::PolySpiral, a, 0.0, res, k};
  spec.truncation = spiral_min_xmax(FamilyKind::PolySpiral, a, res, k);
  auto f = sample_family(spec);
  auto g = apply_map(radial_stretch(k), f);
  const double b = a / k;
  double worst = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.params()[i];
    if (std::isnan(x)) continue;
    const Complex expect = std::polar(std::pow(x, -b), x);
    worst = std::max(worst, std::abs(Complex{g.point(i)[0], g.point(i)[1]} - expect));
  }
  return worst;
}

// Ratio of the singular values of the finite-difference Jacobian at z.
double local_distortion(const PlanarMap& f, Complex z) {
  const double h = 1e-6 * std::abs(z);
  const Complex fx = (f(z + h) - f(z - h)) / (2.0 * h);
  const Complex fy = (f(z + Complex{0, h}) - f(z - Complex{0, h})) / (2.0 * h);
  const Complex dz = 0.5 * (fx - Complex{0, 1} * fy);
  const Complex dzbar = 0.5 * (fx + Complex{0, 1} * fy);
  return (std::abs(dz) + std::abs(dzbar)) / std::abs(std::abs(dz) - std::abs(dzbar));
}

}  // namespace

TEST_CASE("radial stretch with K = 1 is the identity") {
  auto f = radial_stretch(1.0);
  CHECK(f.is_identity());
  const Complex z{0.3, -0.7};
  CHECK(f(z) == z);
  CHECK_THROWS_AS(radial_stretch(0.5), Error);
}

TEST_CASE("radial stretch fixes the unit circle and sends S_2 to S_1") {
  auto f = radial_stretch(2.0);
  const Complex z = std::polar(1.0, 1.0);
  CHECK(std::abs(f(z) - z) < 1e-15);
  const Complex on_s2 = std::polar(1.0 / 16.0, 4.0);
  const Complex w = f(on_s2);
  CHECK(std::abs(w) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(std::arg(w) == doctest::Approx(4.0 - 2.0 * kPi).epsilon(1e-14));
}

TEST_CASE("transport onto S_a/K") {
  CHECK(transport_residual(2.0, 2.0, 1e-3) < 1e-10);
  CHECK(transport_residual(3.0, 1.5, 1e-3) < 1e-10);
  CHECK(transport_residual(1.0, 4.0, 1e-3) < 1e-10);
}

TEST_CASE("dilatation bookkeeping") {
  auto r2 = radial_stretch(2.0), r3 = radial_stretch(3.0);
  CHECK(compose(identity_map(), r2).dilatation_bound() == 2.0);
  auto m = mobius({1, 0}, {0.5, 0}, {0.2, 0}, {1, 0});
  CHECK(m.dilatation_bound() == 1.0);
  CHECK(compose(m, r2).dilatation_bound() == 2.0);
  auto r6 = compose(r2, r3);
  CHECK(r6.dilatation_bound() == 6.0);
  double worst = 0.0;
  for (double rho : {0.01, 0.1, 0.5, 0.9}) {
    for (double phi = 0.1; phi < 6.2; phi += 0.7) {
      worst = std::max(worst, local_distortion(r6, std::polar(rho, phi)));
    }
  }
  CHECK(worst <= 6.0 * (1.0 + 1e-5));
  CHECK(worst >= 6.0 * (1.0 - 1e-5));
  CHECK(local_distortion(m, {0.3, 0.4}) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("bi-Holder exponents") {
  auto id = bi_holder_exponents(identity_map());
  CHECK(id.alpha == 1.0);
  CHECK(id.beta == 1.0);
  auto r2 = bi_holder_exponents(radial_stretch(2.0));
  CHECK(r2.alpha == 0.5);
  CHECK(r2.beta == 2.0);
  auto r6 = compose(radial_stretch(2.0), radial_stretch(3.0));
  auto e6 = bi_holder_exponents(r6);
  CHECK(e6.alpha == doctest::Approx(1.0 / 6.0));
  CHECK(e6.beta == doctest::Approx(6.0));
  // At the origin the composite attains both exponents.
  const Complex z = std::polar(1e-8, 0.3);
  CHECK(std::log(std::abs(r6(z))) / std::log(std::abs(z)) == doctest::Approx(e6.alpha).epsilon(1e-9));
  const Complex w = std::polar(1e-2, 0.3);
  CHECK(std::log(std::abs(r6.inverse()(w))) / std::log(std::abs(w)) == doctest::Approx(e6.beta).epsilon(1e-9));
}

TEST_CASE("inverse round trip") {
  auto f = parse_map("similarity:s=2+1i,t=0.1|radial:K=3|mobius:a=1,b=0.2,c=0.1,d=1");
  auto g = f.inverse();
  CHECK(g.dilatation_bound() == f.dilatation_bound());
  for (double phi = 0.0; phi < 6.0; phi += 0.5) {
    const Complex z = std::polar(0.3, phi);
    CHECK(std::abs(g(f(z)) - z) < 1e-12);
  }
}

TEST_CASE("map mini-language") {
  CHECK(parse_map("identity").is_identity());
  auto f = parse_map("radial:K=2|similarity:s=1+2i,t=-0.5i");
  CHECK(f.dilatation_bound() == 2.0);
  auto g = parse_map(f.to_string());
  for (double phi = 0.0; phi < 6.0; phi += 1.0) {
    const Complex z = std::polar(0.4, phi);
    CHECK(std::abs(f(z) - g(z)) < 1e-15);
  }
  CHECK(parse_map("radialinv:K=3").dilatation_bound() == 3.0);
  CHECK(parse_complex("-1.5-2i") == Complex{-1.5, -2.0});
  CHECK(parse_complex("i") == Complex{0.0, 1.0});
  CHECK_THROWS_AS(parse_map("twist:K=2"), Error);
  CHECK_THROWS_AS(parse_map("radial:L=2"), Error);
  CHECK_THROWS_AS(parse_map("radial:K=abc"), Error);
  CHECK_THROWS_AS(parse_map("radial:K=0.5"), Error);
}

TEST_CASE("apply map on point sets") {
  PointSet corners(2, 0.1, {0, 0, 1, 0, 0, 1, 1, 1});
  auto id = apply_map(identity_map(), corners);
  CHECK(id == corners);
  auto s = apply_map(similarity({2, 0}, {0, 0}), corners);
  const std::vector<double> expect{0, 0, 2, 0, 0, 2, 2, 2};
  for (std::size_t i = 0; i < expect.size(); ++i) CHECK(s.coords()[i] == expect[i]);
  CHECK(s.resolution() == doctest::Approx(0.2));

  PointSet near_pole(2, 1e-3, {0.0, 0.0, 0.5, 0.5});
  CHECK_THROWS_AS(apply_map(mobius({0, 0}, {1, 0}, {1, 0}, {0, 0}), near_pole), Error);
  try {
    apply_map(mobius({0, 0}, {1, 0}, {1, 0}, {0, 0}), near_pole);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleProximity);
  }
  PointSet line(1, 0.1, {0.0, 1.0});
  CHECK_THROWS_AS(apply_map(identity_map(), line), Error);
}

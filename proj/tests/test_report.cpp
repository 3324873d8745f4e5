#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>

#include "errors.hpp"
#include "estimators.hpp"
#include "families.hpp"
#include "report.hpp"

using namespace alab;
using nlohmann::json;

TEST_CASE("csv round trip is bit exact") {
  auto f = sample_family({FamilyKind::PolySpiral, 1.0, 60.0, 1e-2});
  const std::string text = points_to_csv(f);
  CHECK(text.rfind("# resolution=", 0) == 0);
  auto g = parse_points_csv(text);
  CHECK(g == f);
  CHECK(points_to_csv(g) == text);

  auto h = parse_points_json(points_to_json(f));
  CHECK(h == f);
  CHECK(parse_points(points_to_json(f)) == f);
}

TEST_CASE("point files on disk") {
  const auto dir = std::filesystem::temp_directory_path() / "assouad_lab_test_report";
  std::filesystem::create_directories(dir);
  auto f = sample_family({FamilyKind::Cantor, 1.0 / 3.0, 5});
  write_points(f, (dir / "c.csv").string());
  write_points(f, (dir / "c.json").string());
  CHECK(read_points((dir / "c.csv").string()) == f);
  CHECK(read_points((dir / "c.json").string()) == f);
  CHECK_THROWS_AS(read_points((dir / "missing.csv").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv parse errors") {
  CHECK_THROWS_AS(parse_points_csv("x0,x1\n1,2\n3\n"), Error);
  CHECK_THROWS_AS(parse_points_csv("x0,x1\n1,abc\n"), Error);
  // Without a declared resolution the caller must supply one.
  CHECK_THROWS_AS(parse_points_csv("x0\n0.5\n"), Error);
  CHECK(parse_points_csv("x0\n0.5\n", 1e-3).size() == 1);
}

TEST_CASE("spectrum json and csv") {
  auto f = sample_family({FamilyKind::Cantor, 1.0 / 3.0, 8});
  auto idx = MultiScaleIndex::build(f, MultiScaleIndex::max_level_for(f));
  auto g = theta_grid(0.1, 0.5, 0.2);
  auto sp = estimate_spectrum(idx, g, default_window(idx));
  auto j = spectrum_json(sp);
  CHECK(j["schema"] == "assouad-lab/1");
  CHECK(j["theta"].size() == 3);
  CHECK(j["ambient_dim"] == 1);
  const std::string csv = spectrum_csv(sp);
  CHECK(csv.rfind("theta,", 0) == 0);
  auto fn = interpolated_spectrum(sp);
  REQUIRE(fn(0.3));
  CHECK(*fn(0.3) == doctest::Approx(*sp.regularized[1]));
  CHECK_FALSE(fn(0.05));
}

TEST_CASE("bounds report") {
  auto r = bounds_report({{"kind", "assouad"}, {"K", 2.0}, {"alpha", 1.0}});
  CHECK(r["values"]["lower"].get<double>() == doctest::Approx(2.0 / 3.0));
  CHECK(r["values"]["upper"].get<double>() == doctest::Approx(4.0 / 3.0));
  CHECK(r["assumptions"].size() >= 1);

  auto s = bounds_report({{"kind", "spectrum"}, {"K", 2.0}, {"t", 1.0}, {"source", {{"kind", "spiral"}, {"a", 2.0}}}});
  CHECK(s["values"]["upper"].get<double>() == doctest::Approx(2.0));

  auto c = bounds_report({{"kind", "classify"}, {"a", 1.0}, {"b", 3.0}});
  CHECK(c["values"]["dilatation"] == 3.0);
  CHECK(c["values"]["via_inverse"] == true);

  CHECK_THROWS_AS(bounds_report({{"kind", "nope"}}), Error);
  CHECK_THROWS_AS(bounds_report({{"kind", "beta"}, {"n", 3}, {"K", 2.0}, {"alpha", 1.0}}), Error);
  auto b3 = bounds_report({{"kind", "beta"}, {"n", 3}, {"K", 2.0}, {"p", 6.0}, {"alpha", 1.0}});
  CHECK(b3["values"]["upper"].get<double>() == doctest::Approx(6.0 / 4.0));
}

TEST_CASE("image oracle detection") {
  CHECK(image_spiral_exponent(2.0, "radial:K=2") == doctest::Approx(1.0));
  CHECK(image_spiral_exponent(1.0, "identity") == doctest::Approx(1.0));
  CHECK(image_spiral_exponent(1.0, "similarity:s=2i,t=0|radial:K=4") == doctest::Approx(0.25));
  CHECK_FALSE(image_spiral_exponent(1.0, "similarity:s=1,t=0.5|radial:K=2"));
}

TEST_CASE("verify passes for a true image and catches a false claim") {
  VerifyOptions o;
  o.a = 2.0;
  o.map_spec = "radial:K=2";
  o.resolution = 1e-4;
  o.theta_step = 0.1;
  o.source_step = 0.02;
  auto rep = run_verify(o);
  CHECK(rep.passed);
  CHECK(rep.oracle_available);
  CHECK_FALSE(rep.oracle_binding);

  // Claim the image is S_2 again: its spectrum sits well below that of S_1.
  SpectrumFn wrong = [](double theta) -> std::optional<double> { return oracle_spiral_spectrum(2.0, theta); };
  auto bad = run_verify(o, wrong);
  CHECK_FALSE(bad.passed);
  bool failed_where_apart = false;
  for (const auto& row : bad.rows) {
    if (!row.feasible || row.passed) continue;
    const double gap = oracle_spiral_spectrum(1.0, row.theta) - oracle_spiral_spectrum(2.0, row.theta);
    failed_where_apart = failed_where_apart || gap >= 0.2;
  }
  CHECK(failed_where_apart);
}

TEST_CASE("verify at a single t tracks the image spiral") {
  VerifyOptions o;
  o.a = 1.0;
  o.map_spec = "radial:K=2";
  o.t = 1.0;
  auto rep = run_verify(o);
  CHECK(rep.passed);
  REQUIRE(rep.rows.size() == 1);
  const auto& row = rep.rows.front();
  REQUIRE(row.feasible);
  CHECK(row.theta == 0.5);
  CHECK(std::abs(*row.image - oracle_spiral_spectrum(0.5, 0.5)) <= 0.15);
}

TEST_CASE("verify identity collapses the bounds") {
  VerifyOptions o;
  o.a = 2.0;
  o.resolution = 1e-3;
  o.theta_step = 0.1;
  auto rep = run_verify(o);
  CHECK(rep.passed);
  for (const auto& row : rep.rows) {
    if (!row.feasible) continue;
    CHECK(*row.lower == doctest::Approx(*row.upper));
  }
  auto j = rep.to_json();
  CHECK(j["passed"] == true);
  CHECK(j["rows"].size() == rep.rows.size());
}

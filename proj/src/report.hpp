#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "distortion_bounds.hpp"
#include "estimators.hpp"
#include "multiscale_index.hpp"
#include "point_set.hpp"

namespace alab {

inline constexpr const char* kSchema = "assouad-lab/1";

// Point files. CSV: optional "# resolution=R stretch_grade=G" comment,
// optional header row (a column named "param" marks curve parameters), one
// point per row. JSON: {"dim", "resolution", "points", ["params"]}.
std::string points_to_csv(const PointSet& points);
std::string points_to_json(const PointSet& points);
PointSet parse_points_csv(const std::string& text, std::optional<double> resolution = {});
PointSet parse_points_json(const std::string& text, std::optional<double> resolution = {});
/// Picks the format from the first non-blank character.
PointSet parse_points(const std::string& text, std::optional<double> resolution = {});

PointSet read_points(const std::string& path, std::optional<double> resolution = {});
/// JSON when the path ends in ".json", CSV otherwise.
void write_points(const PointSet& points, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

nlohmann::json index_stats_json(const MultiScaleIndex& idx);
nlohmann::json window_json(const ScaleWindow& w);
nlohmann::json dim_estimate_json(const DimEstimate& est);
nlohmann::json spectrum_json(const SpectrumEstimate& spec);
/// Two columns: theta, regularized (empty field where absent).
std::string spectrum_csv(const SpectrumEstimate& spec);

/// Regularized spectrum as a function, interpolated linearly between
/// present grid values and undefined outside them.
SpectrumFn interpolated_spectrum(const SpectrumEstimate& spec);

// End-to-end check of the planar spectrum distortion bounds on a
// polynomial spiral pushed through a map.
struct VerifyOptions {
  double a = 1.0;
  std::string map_spec = "identity";
  std::optional<double> t;  // single theta(t); otherwise the image grid
  double epsilon = 0.2;
  double resolution = 1e-4;
  std::optional<double> xmax;
  double theta_lo = 0.05;
  double theta_hi = 0.9;
  double theta_step = 0.05;
  double source_step = 0.01;
  EstimatorOptions estimator;
};

struct VerifyRow {
  double theta = 0.0;
  double t = 0.0;
  bool feasible = false;
  std::string reason;
  std::optional<double> source_upper_arg;  // source value at theta(t/K)
  std::optional<double> source_lower_arg;  // source value at theta(Kt)
  std::optional<double> lower;
  std::optional<double> upper;
  std::optional<double> biholder;
  std::optional<double> image;
  std::optional<double> oracle;
  std::optional<bool> oracle_agrees;  // |image - oracle| <= epsilon
  double slack = 0.0;  // smallest margin over the checks (negative on failure)
  bool passed = true;
};

struct VerifyReport {
  VerifyOptions options;
  double dilatation = 1.0;
  double xmax = 0.0;
  std::size_t source_points = 0;
  std::size_t image_points = 0;
  double image_resolution = 0.0;
  SpectrumEstimate source;
  SpectrumEstimate image;
  bool oracle_available = false;
  bool oracle_binding = false;  // only an injected oracle enters the verdict
  std::vector<VerifyRow> rows;
  double seconds_sample = 0.0;
  double seconds_estimate = 0.0;
  bool passed = false;

  nlohmann::json to_json() const;
};

/// Evaluates one distortion formula described by a JSON request and returns
/// {"schema", "inputs", "formula", "values", "assumptions"}. Request keys:
/// "kind" (theta | beta | symmetric | spectrum | spectrum_lambda | assouad |
/// assouad_lambda | biholder | ours | compare | classify), "n", "K", "p",
/// "inner_p", "k_inner", "lambda", "alpha", "t", "theta", "d", "a", "b", and
/// "source" ({"kind":"spiral","a":..} | {"kind":"constant","value":..} |
/// {"kind":"spectrum","theta":[..],"regularized":[..]}).
nlohmann::json bounds_report(const nlohmann::json& request);

/// Image-spectrum oracle for the scenario when the map sends S_a onto a
/// similar copy of S_b (radial stretches preceded only by zero-offset
/// similarities, followed by any conformal maps).
std::optional<double> image_spiral_exponent(double a, const std::string& map_spec);

/// A row passes when the image estimate lies in the distortion bounds
/// (and under the bi-Holder bound where that applies), each widened by
/// epsilon. The built-in spiral oracle is only reported. An injected
/// `image_oracle` is a claim under test: rows also fail when the estimate
/// is more than epsilon away from it.
VerifyReport run_verify(const VerifyOptions& options, const std::optional<SpectrumFn>& image_oracle = {});

}  // namespace alab

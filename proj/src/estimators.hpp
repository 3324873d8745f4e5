#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "multiscale_index.hpp"

namespace alab {

/// Range of covering scales an estimator may use, in the units of the
/// point coordinates.
struct ScaleWindow {
  double r_min = 0.0;
  double r_max = 0.0;
};

/// rMin = 4 * resolution, rMax = diam(root) / 4 (never above the root half
/// side).
ScaleWindow default_window(const MultiScaleIndex& idx);
void validate_window(const MultiScaleIndex& idx, const ScaleWindow& w);

enum class DimMethod { Box, SpectrumLimit, AssouadWindow };
const char* dim_method_name(DimMethod m) noexcept;

struct ScalePoint {
  double log_scale = 0.0;  // log of the scale ratio (1/s for box counts, R/r otherwise)
  double log_count = 0.0;
};

struct DimEstimate {
  double value = 0.0;
  std::optional<double> percentile_value;
  DimMethod method = DimMethod::Box;
  ScaleWindow window;
  std::vector<ScalePoint> slope_diagnostics;
  std::optional<double> theta;  // set for the spectrum-limit method
};

struct SpectrumDiagnostic {
  double big_radius = 0.0;    // R
  double small_radius = 0.0;  // r
  std::vector<double> center;
  std::size_t count = 0;
  std::size_t pairs = 0;
  double intercept = 0.0;
};

struct SpectrumEstimate {
  std::vector<double> theta;
  std::vector<std::optional<double>> values;
  std::vector<std::optional<double>> regularized;
  std::vector<std::optional<double>> percentile;
  std::vector<std::optional<SpectrumDiagnostic>> diagnostics;
  ScaleWindow window;
  int ambient_dim = 0;
  int center_budget = 0;
  double radius_scale = 1.0;

  std::size_t present_count() const;
};

struct EstimatorOptions {
  int center_budget = 256;
  /// Query cells are sized for C1 * r instead of r (scale relaxation).
  double radius_scale = 1.0;
};

/// Deterministic farthest-point subsample of the indexed points, seeded at
/// the lexicographically smallest point. Returns indices into idx.point().
std::vector<std::size_t> farthest_point_centers(const MultiScaleIndex& idx, int budget);

/// Least-squares slope and intercept of y against x.
std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y);

DimEstimate estimate_box_dim(const MultiScaleIndex& idx, const ScaleWindow& window);

/// Counts are occupied cells of side ~r whose centers lie in B(x, R). A
/// theta stays absent unless its pairs span a factor 4 in R/r.
SpectrumEstimate estimate_spectrum(const MultiScaleIndex& idx, std::span<const double> theta_grid,
                                   const ScaleWindow& window, const EstimatorOptions& opts = {});

/// Regularized value at the largest grid theta <= thetaHi that has a
/// slope; est.theta says which.
DimEstimate estimate_quasi_assouad(const MultiScaleIndex& idx, const ScaleWindow& window,
                                   const EstimatorOptions& opts = {}, double theta_hi = 0.9);

DimEstimate estimate_assouad(const MultiScaleIndex& idx, const ScaleWindow& window,
                             const EstimatorOptions& opts = {});

/// Smallest grid theta whose regularized value reaches the estimated
/// quasi-Assouad value (the largest regularized value) minus epsilon; 1 if
/// there is none.
double estimate_rho(const SpectrumEstimate& spectrum, int ambient_dim, double epsilon);

/// Evenly spaced grid lo, lo+step, ..., up to hi (inclusive within 1e-9).
std::vector<double> theta_grid(double lo, double hi, double step);

/// Worker count from ASSOUAD_LAB_THREADS, else hardware concurrency.
unsigned worker_threads();

}  // namespace alab

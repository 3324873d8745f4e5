#include "estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <thread>

#include "errors.hpp"

namespace alab {

namespace {

constexpr double kLog2 = 0.69314718055994530942;
constexpr std::size_t kMinSpectrumPairs = 3;
// A spectrum slope is only fitted when log(R/r) spans at least log 4.
constexpr double kMinSpectrumSpan = 1.3862943611198906;
constexpr double kLadderStep = 0.70710678118654752;

double clamp_dim(double v, int n) { return std::clamp(v, 0.0, static_cast<double>(n)); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::min<std::size_t>(worker_threads(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) body(i);
    });
  }
}

double percentile95(std::vector<std::size_t> counts) {
  std::sort(counts.begin(), counts.end());
  const std::size_t k = static_cast<std::size_t>(std::ceil(0.95 * counts.size())) - 1;
  return static_cast<double>(counts[std::min(k, counts.size() - 1)]);
}

struct PairResult {
  double big_radius;
  double small_radius;
  std::size_t max_count;
  double p95;
  std::size_t argmax;
};

constexpr std::size_t kDenseCandidates = 2;

// Farthest-point centers spread evenly over the sample and so can miss a
// small region where the set is most crowded. Each scale pair therefore
// also tries points inside the cells of side ~R holding the most occupied
// cells of side ~r.
class CenterPool {
 public:
  CenterPool(const MultiScaleIndex& idx, int budget)
      : idx_(idx), spread_(farthest_point_centers(idx, budget)) {}

  std::span<const std::size_t> spread() const { return spread_; }

  std::vector<std::size_t> dense(int big_level, int small_level) const {
    const auto key = std::make_pair(big_level, small_level);
    {
      std::lock_guard lock(mu_);
      if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    std::vector<std::size_t> out;
    const int n = idx_.dim();
    for (auto code : idx_.densest_cells(big_level, small_level, kDenseCandidates)) {
      int level = big_level;
      while (level < small_level) {
        MultiScaleIndex::Code best_child = 0;
        std::size_t best = 0;
        for (MultiScaleIndex::Code child = code << n; child < ((code + 1) << n); ++child) {
          const std::size_t c = idx_.descendant_count(level + 1, child, small_level);
          if (c > best) {
            best = c;
            best_child = child;
          }
        }
        code = best_child;
        ++level;
      }
      out.push_back(idx_.first_point_in_cell(small_level, code));
    }
    std::lock_guard lock(mu_);
    cache_.emplace(key, out);
    return out;
  }

 private:
  const MultiScaleIndex& idx_;
  std::vector<std::size_t> spread_;
  mutable std::mutex mu_;
  mutable std::map<std::pair<int, int>, std::vector<std::size_t>> cache_;
};

PairResult measure_pair(const MultiScaleIndex& idx, const CenterPool& pool, double big_radius,
                        double small_radius, double radius_scale) {
  const int level = idx.snap_level(2.0 * radius_scale * small_radius);
  const int big_level = std::min(idx.snap_level(2.0 * big_radius), level);
  auto spread = pool.spread();
  std::vector<std::size_t> counts(spread.size());
  std::size_t best = 0, argmax = 0;
  auto consider = [&](std::size_t center) {
    const std::size_t c = idx.count_centers_in_ball(idx.point(center), big_radius, level);
    if (c > best) {
      best = c;
      argmax = center;
    }
    return c;
  };
  for (std::size_t c = 0; c < spread.size(); ++c) counts[c] = consider(spread[c]);
  for (std::size_t center : pool.dense(big_level, level)) consider(center);
  return {big_radius, small_radius, best, percentile95(std::move(counts)), argmax};
}

bool pair_level_ok(const MultiScaleIndex& idx, double small_radius, double radius_scale) {
  const int level = idx.snap_level(2.0 * radius_scale * small_radius);
  return level <= idx.max_level() && idx.cell_side(level) >= idx.resolution() * (1.0 - 1e-12);
}

}  // namespace

unsigned worker_threads() {
  if (const char* env = std::getenv("ASSOUAD_LAB_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

const char* dim_method_name(DimMethod m) noexcept {
  switch (m) {
    case DimMethod::Box: return "box";
    case DimMethod::SpectrumLimit: return "spectrumLimit";
    case DimMethod::AssouadWindow: return "assouadWindow";
  }
  return "unknown";
}

std::size_t SpectrumEstimate::present_count() const {
  return static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

ScaleWindow default_window(const MultiScaleIndex& idx) {
  return {4.0 * idx.resolution(), std::min(idx.root_diameter() / 4.0, idx.root().radius)};
}

void validate_window(const MultiScaleIndex& idx, const ScaleWindow& w) {
  if (!std::isfinite(w.r_min) || !std::isfinite(w.r_max)) {
    fail(ErrorCode::InvalidArgument, "window bounds must be finite");
  }
  if (w.r_min < idx.resolution() * (1.0 - 1e-12)) {
    fail(ErrorCode::ScaleBelowResolution, "window rMin " + std::to_string(w.r_min) +
                                              " is below the resolution " +
                                              std::to_string(idx.resolution()));
  }
  if (!(w.r_min < w.r_max)) fail(ErrorCode::WindowTooNarrow, "window needs rMin < rMax");
  if (w.r_max > idx.root_diameter() * (1.0 + 1e-12)) {
    fail(ErrorCode::InvalidArgument, "window rMax exceeds the root diameter");
  }
}

std::pair<double, double> fit_line(std::span<const double> x, std::span<const double> y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  return {slope, my - slope * mx};
}

std::vector<std::size_t> farthest_point_centers(const MultiScaleIndex& idx, int budget) {
  if (budget < 1) fail(ErrorCode::InvalidArgument, "center budget must be >= 1");
  const std::size_t count = idx.point_count();
  const int n = idx.dim();
  std::size_t seed = 0;
  for (std::size_t i = 1; i < count; ++i) {
    auto p = idx.point(i), q = idx.point(seed);
    if (std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end())) seed = i;
  }
  std::vector<std::size_t> centers{seed};
  const std::size_t want = std::min<std::size_t>(static_cast<std::size_t>(budget), count);
  std::vector<double> dist(count, std::numeric_limits<double>::infinity());
  std::size_t last = seed;
  while (centers.size() < want) {
    auto c = idx.point(last);
    std::size_t far = 0;
    double far_d = -1.0;
    for (std::size_t i = 0; i < count; ++i) {
      auto p = idx.point(i);
      double d2 = 0.0;
      for (int d = 0; d < n; ++d) d2 += (p[d] - c[d]) * (p[d] - c[d]);
      dist[i] = std::min(dist[i], d2);
      if (dist[i] > far_d) {
        far_d = dist[i];
        far = i;
      }
    }
    if (far_d <= 0.0) break;  // every remaining point coincides with a center
    centers.push_back(far);
    last = far;
  }
  return centers;
}

DimEstimate estimate_box_dim(const MultiScaleIndex& idx, const ScaleWindow& window) {
  validate_window(idx, window);
  DimEstimate est;
  est.method = DimMethod::Box;
  est.window = window;
  std::vector<double> xs, ys;
  for (int m = 0; m <= idx.max_level(); ++m) {
    const double s = idx.cell_side(m);
    if (s > window.r_max * (1.0 + 1e-12) || s < window.r_min * (1.0 - 1e-12)) continue;
    xs.push_back(m * kLog2);
    ys.push_back(std::log(static_cast<double>(idx.occupied_count(m))));
    est.slope_diagnostics.push_back({xs.back(), ys.back()});
  }
  if (xs.size() < 4) {
    fail(ErrorCode::WindowTooNarrow,
         "box estimate needs at least 4 dyadic levels in the window, found " +
             std::to_string(xs.size()));
  }
  est.value = clamp_dim(fit_line(xs, ys).first, idx.dim());
  return est;
}

SpectrumEstimate estimate_spectrum(const MultiScaleIndex& idx, std::span<const double> theta_grid,
                                   const ScaleWindow& window, const EstimatorOptions& opts) {
  validate_window(idx, window);
  if (opts.center_budget < 1) fail(ErrorCode::InvalidArgument, "center budget must be >= 1");
  if (!(opts.radius_scale >= 1.0)) fail(ErrorCode::InvalidArgument, "radius scale must be >= 1");
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    if (!(theta_grid[i] > 0.0 && theta_grid[i] < 1.0)) {
      fail(ErrorCode::InvalidArgument, "theta values must lie in (0,1)");
    }
    if (i > 0 && !(theta_grid[i] > theta_grid[i - 1])) {
      fail(ErrorCode::InvalidArgument, "theta grid must be increasing");
    }
  }

  SpectrumEstimate out;
  out.theta.assign(theta_grid.begin(), theta_grid.end());
  const std::size_t k = out.theta.size();
  out.values.resize(k);
  out.regularized.resize(k);
  out.percentile.resize(k);
  out.diagnostics.resize(k);
  out.window = window;
  out.ambient_dim = idx.dim();
  out.center_budget = opts.center_budget;
  out.radius_scale = opts.radius_scale;

  const CenterPool centers(idx, opts.center_budget);

  // Pairs follow the curve r = c * R^(1/theta), pinned so that R/r = 4 at
  // R = rMax; r walks down to rMin in half-octave steps.
  const double r_top = window.r_max / 4.0;
  std::vector<double> small_radii;
  for (double r = r_top; r >= window.r_min * (1.0 - 1e-12); r *= kLadderStep) {
    if (pair_level_ok(idx, r, opts.radius_scale)) small_radii.push_back(r);
  }

  parallel_for(k, [&](std::size_t i) {
    const double theta = out.theta[i];
    std::vector<double> xs, ys, ps;
    std::optional<PairResult> finest;
    for (double r : small_radii) {
      const double big = window.r_max * std::pow(r / r_top, theta);
      auto res = measure_pair(idx, centers, big, r, opts.radius_scale);
      if (res.max_count == 0) continue;
      xs.push_back(std::log(big / r));
      ys.push_back(std::log(static_cast<double>(res.max_count)));
      ps.push_back(std::log(res.p95));
      finest = res;
    }
    if (xs.size() < kMinSpectrumPairs || xs.back() - xs.front() < kMinSpectrumSpan) return;
    const auto [slope, intercept] = fit_line(xs, ys);
    out.values[i] = clamp_dim(slope, idx.dim());
    out.percentile[i] = clamp_dim(fit_line(xs, ps).first, idx.dim());
    auto c = idx.point(finest->argmax);
    out.diagnostics[i] = SpectrumDiagnostic{finest->big_radius, finest->small_radius,
                                            std::vector<double>(c.begin(), c.end()),
                                            finest->max_count, xs.size(), intercept};
  });

  std::optional<double> running;
  for (std::size_t i = 0; i < k; ++i) {
    if (!out.values[i]) continue;
    running = running ? std::max(*running, *out.values[i]) : *out.values[i];
    out.regularized[i] = running;
  }
  return out;
}

std::vector<double> theta_grid(double lo, double hi, double step) {
  std::vector<double> grid;
  for (int i = 0;; ++i) {
    const double t = lo + i * step;
    if (t > hi + 1e-9) break;
    grid.push_back(std::round(t * 1e12) / 1e12);
  }
  return grid;
}

DimEstimate estimate_quasi_assouad(const MultiScaleIndex& idx, const ScaleWindow& window,
                                   const EstimatorOptions& opts, double theta_hi) {
  if (!(theta_hi > 0.0 && theta_hi < 1.0)) {
    fail(ErrorCode::InvalidArgument, "thetaHi must lie in (0,1)");
  }
  auto grid = theta_grid(0.05, theta_hi, 0.05);
  if (grid.empty() || grid.back() < theta_hi - 1e-9) grid.push_back(theta_hi);
  const auto spectrum = estimate_spectrum(idx, grid, window, opts);
  // Near thetaHi the window may be too short for a slope; fall back to the
  // largest theta that has one and report it.
  std::size_t top = spectrum.theta.size();
  while (top > 0 && !spectrum.regularized[top - 1]) --top;
  if (top == 0) fail(ErrorCode::WindowTooNarrow, "no theta in the grid has enough scale pairs");
  DimEstimate est;
  est.method = DimMethod::SpectrumLimit;
  est.window = window;
  est.value = *spectrum.regularized[top - 1];
  est.theta = spectrum.theta[top - 1];
  std::optional<double> p;
  for (std::size_t i = 0; i < spectrum.theta.size(); ++i) {
    if (spectrum.percentile[i]) p = p ? std::max(*p, *spectrum.percentile[i]) : *spectrum.percentile[i];
    if (spectrum.values[i]) est.slope_diagnostics.push_back({spectrum.theta[i], *spectrum.values[i]});
  }
  est.percentile_value = p;
  return est;
}

DimEstimate estimate_assouad(const MultiScaleIndex& idx, const ScaleWindow& window,
                             const EstimatorOptions& opts) {
  validate_window(idx, window);
  if (opts.center_budget < 1) fail(ErrorCode::InvalidArgument, "center budget must be >= 1");
  const CenterPool centers(idx, opts.center_budget);

  // Pairs (R, r) = (2^k r_j, r_j), k >= 2, over the dyadic ladder
  // r_j = rMax 2^-j. For each ratio 2^k keep the worst (largest) count.
  struct Task {
    int k;
    double r;
  };
  std::vector<Task> tasks;
  int k_max = 0;
  for (int j = 2;; ++j) {
    const double r = std::ldexp(window.r_max, -j);
    if (r < window.r_min * (1.0 - 1e-12)) break;
    if (!pair_level_ok(idx, r, opts.radius_scale)) continue;
    for (int k = 2; k <= j; ++k) tasks.push_back({k, r});
    k_max = std::max(k_max, j);
  }
  if (k_max < 4) {
    fail(ErrorCode::WindowTooNarrow, "Assouad estimate needs scale ratios up to at least 2^4");
  }
  std::vector<PairResult> results(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t t) {
    results[t] = measure_pair(idx, centers, std::ldexp(tasks[t].r, tasks[t].k), tasks[t].r,
                              opts.radius_scale);
  });
  std::vector<double> worst(k_max + 1, 0.0), worst_p(k_max + 1, 0.0);
  for (std::size_t t = 0; t < tasks.size(); ++t) {
    worst[tasks[t].k] = std::max(worst[tasks[t].k], static_cast<double>(results[t].max_count));
    worst_p[tasks[t].k] = std::max(worst_p[tasks[t].k], results[t].p95);
  }
  DimEstimate est;
  est.method = DimMethod::AssouadWindow;
  est.window = window;
  std::vector<double> xs, ys, ps;
  for (int k = 2; k <= k_max; ++k) {
    if (worst[k] <= 0.0) continue;
    xs.push_back(k * kLog2);
    ys.push_back(std::log(worst[k]));
    ps.push_back(std::log(std::max(worst_p[k], 1.0)));
    est.slope_diagnostics.push_back({xs.back(), ys.back()});
  }
  if (xs.size() < 3) fail(ErrorCode::WindowTooNarrow, "too few populated scale ratios");
  est.value = clamp_dim(fit_line(xs, ys).first, idx.dim());
  est.percentile_value = clamp_dim(fit_line(xs, ps).first, idx.dim());
  return est;
}

double estimate_rho(const SpectrumEstimate& spectrum, int ambient_dim, double epsilon) {
  if (!(epsilon > 0.0)) fail(ErrorCode::InvalidArgument, "epsilon must be positive");
  std::optional<double> qa;
  for (const auto& v : spectrum.regularized) {
    if (!v) continue;
    if (*v < -1e-12 || *v > ambient_dim + 1e-12) {
      fail(ErrorCode::InvalidArgument, "spectrum value outside [0, n]");
    }
    qa = qa ? std::max(*qa, *v) : *v;
  }
  if (!qa) return 1.0;
  for (std::size_t i = 0; i < spectrum.theta.size(); ++i) {
    if (spectrum.regularized[i] && *spectrum.regularized[i] >= *qa - epsilon) return spectrum.theta[i];
  }
  return 1.0;
}

}  // namespace alab

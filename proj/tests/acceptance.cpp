// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "distortion_bounds.hpp"
#include "estimators.hpp"
#include "families.hpp"
#include "multiscale_index.hpp"
#include "oracles.hpp"
#include "planar_map.hpp"
#include "report.hpp"

using namespace alab;

namespace {

// Pinned tolerances.
constexpr double kBoxTol = 0.1;
constexpr double kBoxSeconds = 30.0;
constexpr std::size_t kBoxMaxPoints = 2'000'000;
constexpr double kSpectrumSupTol = 0.15;
constexpr double kSpectrumRes = 1e-5;
constexpr double kRhoTol = 0.1;
constexpr double kRhoEps = 0.1;
constexpr double kSpectrumSeconds = 60.0;
constexpr double kCantorTol = 0.06;
constexpr double kCantorThetaReach = 0.8;
constexpr double kTransportTol = 1e-10;
constexpr double kIdentityTol = 1e-12;
constexpr double kVerifyEps = 0.2;
constexpr double kCollapseTol = 0.15;
constexpr int kIndexSets = 200;
constexpr std::size_t kIndexMaxPoints = 10'000;

const double kCantorDim = std::log(2.0) / std::log(3.0);

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int failures = 0;

void report(int n, bool ok, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", n, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

MultiScaleIndex index_of(const PointSet& f) {
  return MultiScaleIndex::build(f, MultiScaleIndex::max_level_for(f));
}

void spiral_box() {
  bool ok = true;
  std::string detail;
  for (double a : {0.5, 2.0}) {
    const auto t0 = Clock::now();
    auto f = sample_family({FamilyKind::PolySpiral, a, 1e4, 1e-3});
    auto idx = index_of(f);
    const double v = estimate_box_dim(idx, default_window(idx)).value;
    const double secs = seconds_since(t0);
    const double want = oracle_spiral_box_dim(a);
    const bool good = std::abs(v - want) <= kBoxTol && secs < kBoxSeconds && f.size() <= kBoxMaxPoints;
    ok = ok && good;
    detail += fmt("S_%g box=%.4f (oracle %.4f, tol %.2f, %zu points, %.1fs); ", a, v, want, kBoxTol, f.size(), secs);
  }
  report(1, ok, detail);
}

void spiral_spectrum() {
  const auto t0 = Clock::now();
  const double a = 1.0;
  auto f = sample_family({FamilyKind::PolySpiral, a, spiral_min_xmax(FamilyKind::PolySpiral, a, kSpectrumRes), kSpectrumRes});
  auto idx = index_of(f);
  auto grid = theta_grid(0.05, 0.9, 0.05);
  auto sp = estimate_spectrum(idx, grid, default_window(idx));
  double sup = 0.0, at = 0.0;
  bool all_present = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (grid[i] > 0.70 + 1e-9) break;
    if (!sp.regularized[i]) {
      all_present = false;
      continue;
    }
    const double err = std::abs(*sp.regularized[i] - oracle_spiral_spectrum(a, grid[i]));
    if (err > sup) {
      sup = err;
      at = grid[i];
    }
  }
  const double rho = estimate_rho(sp, 2, kRhoEps);
  const double secs = seconds_since(t0);
  const bool ok = all_present && sup <= kSpectrumSupTol && std::abs(rho - 0.5) <= kRhoTol && secs < kSpectrumSeconds;
  report(2, ok,
         fmt("S_1 res %g: sup error %.3f at theta %.2f (tol %.2f); rho=%.3f (0.5 +- %.1f, eps %.2f); %zu points, %.1fs",
             kSpectrumRes, sup, at, kSpectrumSupTol, rho, kRhoTol, kRhoEps, f.size(), secs));
}

void cantor() {
  auto f = sample_family({FamilyKind::Cantor, 1.0 / 3.0, 12});
  auto idx = index_of(f);
  auto w = default_window(idx);
  const double box = estimate_box_dim(idx, w).value;
  const double assouad = estimate_assouad(idx, w).value;
  auto grid = theta_grid(0.05, 0.9, 0.05);
  auto sp = estimate_spectrum(idx, grid, w);
  // High theta needs a wider window than depth 12 offers; the present
  // values must still form an unbroken run reaching kCantorThetaReach.
  double worst = 0.0, reach = 0.0;
  bool present = true;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!sp.regularized[i]) continue;
    present = present && (i == 0 || sp.regularized[i - 1]);
    worst = std::max(worst, std::abs(*sp.regularized[i] - kCantorDim));
    reach = grid[i];
  }
  present = present && reach >= kCantorThetaReach - 1e-9;
  // Exact construction counts at triadic scales fix the reference value.
  std::vector<double> x, y;
  for (int k = 2; k <= 12; ++k) {
    x.push_back(k * std::log(3.0));
    y.push_back(std::log(static_cast<double>(oracle::cantor_intervals_hit(f.coords(), k))));
  }
  const double reference = oracle::slope(x, y);
  const bool ok = present && std::abs(reference - kCantorDim) < 1e-9 && std::abs(box - reference) <= kCantorTol &&
                  std::abs(assouad - reference) <= kCantorTol && worst <= kCantorTol;
  report(3, ok,
         fmt("depth 12 (ref %.4f): box=%.4f assouad=%.4f regularized spectrum max dev %.4f over theta 0.05..%.2f "
             "(tol %.2f)",
             reference, box, assouad, worst, reach, kCantorTol));
}

void transport() {
  bool ok = true;
  std::string detail;
  for (auto [a, k] : {std::pair{2.0, 2.0}, {3.0, 1.5}, {1.0, 4.0}}) {
    FamilySpec spec{FamilyKind::PolySpiral, a, 0.0, 1e-3, k};
    spec.truncation = spiral_min_xmax(FamilyKind::PolySpiral, a, 1e-3, k);
    auto f = sample_family(spec);
    auto g = apply_map(radial_stretch(k), f);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double t = g.params()[i];
      if (std::isnan(t)) continue;
      const std::complex<double> expect = std::polar(std::pow(t, -a / k), t);
      worst = std::max(worst, std::abs(std::complex<double>{g.point(i)[0], g.point(i)[1]} - expect));
      ++checked;
    }
    ok = ok && worst < kTransportTol && checked > 0;
    detail += fmt("(%g,%g) residual %.2e over %zu points; ", a, k, worst, checked);
  }
  report(4, ok, detail + fmt("tol %.0e", kTransportTol));
}

void classification() {
  const auto c = classify_spirals(2.0, 1.0);
  bool ok = c.dilatation == 2.0 && c.witness == "radial:K=2";
  double worst = 0.0;
  for (double a : {0.25, 0.5, 1.0, 2.0, 3.0, 5.0}) {
    for (double b : {0.25, 0.5, 1.0, 2.0, 5.0}) {
      const double k = a / b, t = 1.0 / b;
      worst = std::max(worst, std::abs(theta_of_t(t / k) - a / (1.0 + a)));
      worst = std::max(worst, std::abs(theta_of_t(t) - b / (1.0 + b)));
    }
  }
  ok = ok && worst <= kIdentityTol;
  report(5, ok, fmt("classify(2,1) = %.17g witness %s; max theta identity error %.1e (tol %.0e)", c.dilatation,
                    c.witness.c_str(), worst, kIdentityTol));
}

void verify_harness() {
  bool ok = true;
  std::string detail;
  for (auto [k, res] : {std::pair{1.5, 1e-4}, {2.0, 1e-4}, {4.0, 1e-3}}) {
    VerifyOptions o;
    o.a = 1.0;
    o.map_spec = fmt("radial:K=%g", k);
    o.epsilon = kVerifyEps;
    o.resolution = res;
    auto rep = run_verify(o);
    std::size_t feasible = 0, passed = 0;
    double min_slack = INFINITY, oracle_gap = 0.0;
    for (const auto& r : rep.rows) {
      if (!r.feasible) continue;
      ++feasible;
      passed += r.passed;
      min_slack = std::min(min_slack, r.slack);
      if (r.oracle) oracle_gap = std::max(oracle_gap, std::abs(*r.image - *r.oracle));
    }
    ok = ok && rep.passed && feasible > 0 && passed == feasible;
    detail += fmt("K=%g res %g: %zu/%zu rows, min slack %.3f, image-oracle gap %.3f, %.1fs; ", k, res, passed,
                  feasible, min_slack, oracle_gap, rep.seconds_sample + rep.seconds_estimate);
  }
  VerifyOptions o;
  o.a = 1.0;
  o.map_spec = "identity";
  o.epsilon = kVerifyEps;
  auto rep = run_verify(o);
  double collapse = 0.0, spread = 0.0;
  std::size_t feasible = 0;
  for (const auto& r : rep.rows) {
    if (!r.feasible) continue;
    ++feasible;
    spread = std::max(spread, std::abs(*r.upper - *r.lower));
    collapse = std::max(collapse, std::max(std::abs(*r.image - *r.lower), std::abs(*r.image - *r.upper)));
  }
  ok = ok && rep.passed && feasible > 0 && spread <= kIdentityTol && collapse <= kCollapseTol;
  detail += fmt("K=1: upper-lower %.1e, |image-bound| %.3f (tol %.2f); eps %.2f", spread, collapse, kCollapseTol,
                kVerifyEps);
  report(6, ok, detail);
}

void formula_identities() {
  double gv = 0.0;
  int points = 0;
  for (int i = 1; i <= 10; ++i) {
    for (int j = 1; j <= 10; ++j) {
      ExponentContext c;
      c.k = 2.0;
      c.p = 2.0 + 0.5 * j;
      const double alpha = 0.2 * i;
      const double symmetric = 1.0 / ((1.0 - 2.0 / *c.p) * (1.0 / alpha - 0.5) + 0.5);
      gv = std::max(gv, std::abs(beta_upper(alpha, c) - symmetric));
      ++points;
    }
  }
  double coeff = 0.0;
  for (int i = 0; i <= 1000; ++i) {
    ExponentContext c;
    c.k = 1.01 * std::pow(100.0 / 1.01, i / 1000.0);
    coeff = std::max(coeff, std::abs(symmetric_coeff(c) - 1.0 / c.k));
  }
  double ours = 0.0;
  for (double k = 1.0; k <= 50.0; k += 0.25) {
    ExponentContext c;
    c.k = k;
    ours = std::max(ours, std::abs(ours_upper(1.0, k, 1.0) - beta_upper(1.0, c)));
  }
  int checked = 0, violated = 0;
  for (double a : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    SpectrumFn src = [a](double th) -> std::optional<double> { return oracle_spiral_spectrum(a, th); };
    for (double k = 1.0; k <= 4.0; k += 0.25) {
      for (double t = 0.1; t <= 50.0; t *= 1.15) {
        const auto cmp = compare_bounds(t, k, src);
        if (!cmp.hypotheses_hold) continue;
        ++checked;
        if (!(cmp.ours <= *cmp.biholder + kIdentityTol)) ++violated;
      }
    }
  }
  const bool ok = gv <= kIdentityTol && coeff <= kIdentityTol && ours <= kIdentityTol && checked > 0 && violated == 0;
  report(7, ok,
         fmt("upper vs symmetric form %.1e over %d (alpha,p); 1-2/p vs 1/K %.1e; ours vs beta_upper %.1e; "
             "bi-Holder comparison %d/%d grid points in order (tol %.0e)",
             gv, points, coeff, ours, checked - violated, checked, kIdentityTol));
}

void index_properties() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_int_distribution<std::size_t> size(1, kIndexMaxPoints);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  long closure = 0, sandwich = 0, local = 0, queries = 0;
  for (int set = 0; set < kIndexSets; ++set) {
    const int n = dim(rng);
    auto f = oracle::random_cloud(rng, n, size(rng));
    const int max_level = std::min(MultiScaleIndex::max_level_for(f), 18 / n + 2);
    auto idx = MultiScaleIndex::build(f, max_level);
    for (int m = 0; m < max_level; ++m) {
      const auto a = idx.occupied_count(m), b = idx.occupied_count(m + 1);
      if (!(a <= b && b <= (std::size_t{1} << n) * a)) ++sandwich;
      auto parents = idx.cells(m);
      for (auto c : idx.cells(m + 1)) {
        if (!std::binary_search(parents.begin(), parents.end(), c >> n)) ++closure;
      }
    }
    const std::size_t three_n = n == 1 ? 3 : n == 2 ? 9 : 27;
    for (int q = 0; q < 8; ++q) {
      auto x = f.point(std::uniform_int_distribution<std::size_t>(0, f.size() - 1)(rng));
      const double radius = idx.root().radius * (0.02 + 0.9 * u(rng));
      const int m = std::uniform_int_distribution<int>(0, 4)(rng);
      if (idx.snap_level(std::ldexp(2.0 * radius, -m)) > max_level) continue;
      ++queries;
      const auto global = idx.local_dyadic_count(x, radius, m);
      const auto centered = oracle::centered_dyadic_count(f, x, radius, m);
      if (global > three_n * centered || centered > (std::size_t{1} << n) * global) ++local;
    }
  }
  report(8, closure + sandwich + local == 0,
         fmt("%d sets: parent-closure violations %ld, 2^n growth violations %ld, 3^n local-count violations %ld "
             "over %ld queries",
             kIndexSets, closure, sandwich, local, queries));
}

void oracle_properties() {
  int fraser = 0, rho_ineq = 0, lower = 0, monotone = 0, equality = 0, checks = 0;
  const double qa = 2.0;
  for (double a : {0.25, 0.5, 1.0, 2.0, 5.0}) {
    const double box = oracle_spiral_box_dim(a), rho = oracle_spiral_rho(a);
    const double bound = 1.0 - box / qa;
    if (rho < bound - kIdentityTol) ++rho_ineq;
    const bool equal = std::abs(rho - bound) <= kIdentityTol;
    if (equal != (a <= 1.0)) ++equality;
    double prev = 0.0;
    for (int i = 1; i < 100; ++i) {
      const double th = i / 100.0;
      const double v = oracle_spiral_spectrum(a, th);
      ++checks;
      if (v > box / (1.0 - th) + kIdentityTol) ++fraser;
      if (th < rho && v < (1.0 - rho) / (1.0 - th) * qa - kIdentityTol) ++lower;
      if (v < prev - kIdentityTol) ++monotone;
      prev = v;
    }
  }
  report(9, fraser + rho_ineq + lower + monotone + equality == 0,
         fmt("%d (a,theta) points: upper box bound %d, phase-transition bound %d (equality iff a<=1: %d), "
             "lower bound below rho %d, monotonicity %d violations",
             checks, fraser, rho_ineq, equality, lower, monotone));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{spiral_box, spiral_spectrum, cantor,           transport,
                                                    classification, verify_harness, formula_identities,
                                                    index_properties, oracle_properties};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("error: ") + e.what());
    }
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures;
}

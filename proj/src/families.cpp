#include "families.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace alab {

namespace {

constexpr double kTwoPi = 6.283185307179586477;
constexpr std::size_t kMaxSamplePoints = 50'000'000;

/// Modulus profile of a spiral x -> phi(x) e^{ix}, optionally raised to 1/k.
struct Profile {
  FamilyKind kind;
  double rate;  // a or c, already divided by the stretch factor

  double modulus(double x) const {
    return kind == FamilyKind::PolySpiral ? std::pow(x, -rate) : std::exp(-rate * x);
  }
  double speed(double x) const {
    const double phi = modulus(x);
    const double dphi = kind == FamilyKind::PolySpiral ? rate * phi / x : rate * phi;
    return std::sqrt(phi * phi + dphi * dphi);
  }
  double turn_gap(double x) const { return modulus(x) - modulus(x + kTwoPi); }
  bool tail_ok(double x_max, double res) const {
    return modulus(x_max) <= res * (1.0 + 1e-12) || turn_gap(x_max) <= 0.5 * res;
  }
  bool needs_fill(double x_max, double res) const { return modulus(x_max) > res * (1.0 + 1e-12); }
};

void check_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorCode::InvalidParameter, std::string(what) + " must be positive and finite");
  }
}

/// Lattice of spacing h inside the disk |w| <= radius, each point passed
/// through `pull` before being appended.
void fill_disk(double radius, double h, const std::function<void(double, double)>& emit) {
  const auto steps = static_cast<long long>(std::floor(radius / h));
  if (static_cast<double>(2 * steps + 1) * static_cast<double>(2 * steps + 1) >
      static_cast<double>(kMaxSamplePoints)) {
    fail(ErrorCode::InvalidParameter, "tail fill would exceed the sample size limit");
  }
  for (long long i = -steps; i <= steps; ++i) {
    for (long long j = -steps; j <= steps; ++j) {
      const double u = static_cast<double>(i) * h, v = static_cast<double>(j) * h;
      if (u * u + v * v <= radius * radius && (i != 0 || j != 0)) emit(u, v);
    }
  }
}

PointSet sample_spiral(const FamilySpec& spec) {
  const double rate = spec.parameter;
  const double x_max = spec.truncation;
  const double x0 = spec.kind == FamilyKind::PolySpiral ? 1.0 : 0.0;
  check_positive(rate, spec.kind == FamilyKind::PolySpiral ? "a" : "c");
  if (!spec.target_resolution) fail(ErrorCode::InvalidParameter, "spirals need a target resolution");
  const double res = *spec.target_resolution;
  check_positive(res, "resolution");
  if (!(x_max > x0) || !std::isfinite(x_max)) {
    fail(ErrorCode::InvalidParameter, "xMax must exceed the start parameter");
  }
  const double grade = spec.stretch_grade;
  if (!(grade >= 1.0) || !std::isfinite(grade)) {
    fail(ErrorCode::InvalidParameter, "stretch grade must be >= 1");
  }

  const Profile source{spec.kind, rate};
  const Profile image{spec.kind, rate / grade};
  for (const Profile* p : {&source, &image}) {
    if (!p->tail_ok(x_max, res)) {
      fail(ErrorCode::TruncationTooCoarse,
           "tail modulus " + std::to_string(p->modulus(x_max)) + " at xMax exceeds resolution " +
               std::to_string(res) + " and its turns are not resolution-dense");
    }
  }

  std::vector<double> coords, params;
  auto push = [&](double u, double v, double x) {
    coords.push_back(u);
    coords.push_back(v);
    params.push_back(x);
    if (params.size() > kMaxSamplePoints) {
      fail(ErrorCode::InvalidParameter, "sample would exceed the size limit");
    }
  };

  const double half = 0.5 * res;
  for (double x = x0;;) {
    const double rho = source.modulus(x);
    push(rho * std::cos(x), rho * std::sin(x), x);
    if (x >= x_max) break;
    const double step = half / std::max(source.speed(x), image.speed(x));
    x = std::min(x + step, x_max);
  }
  push(0.0, 0.0, std::nan(""));

  const double h = res / std::sqrt(2.0);
  const double nan = std::nan("");
  if (source.needs_fill(x_max, res)) {
    fill_disk(source.modulus(x_max), h, [&](double u, double v) { push(u, v, nan); });
  }
  if (grade > 1.0 && image.needs_fill(x_max, res)) {
    // Pull the image-side lattice back through w -> |w|^(K-1) w.
    fill_disk(image.modulus(x_max), h, [&](double u, double v) {
      const double s = std::pow(std::hypot(u, v), grade - 1.0);
      push(s * u, s * v, nan);
    });
  }

  PointSet out(2, res, std::move(coords), std::move(params));
  out.set_stretch_grade(grade);
  return out;
}

PointSet sample_cantor(const FamilySpec& spec) {
  const double ratio = spec.parameter;
  if (!(ratio > 0.0 && ratio <= 0.5)) fail(ErrorCode::InvalidParameter, "Cantor ratio must lie in (0, 1/2]");
  const double depth_real = spec.truncation;
  if (!(depth_real >= 0.0 && depth_real <= 26.0) || depth_real != std::floor(depth_real)) {
    fail(ErrorCode::InvalidParameter, "Cantor depth must be an integer in 0..26");
  }
  const int depth = static_cast<int>(depth_real);
  std::vector<std::pair<double, double>> intervals{{0.0, 1.0}}, next;
  double length = 1.0;
  for (int level = 0; level < depth; ++level) {
    length *= ratio;
    next.clear();
    next.reserve(intervals.size() * 2);
    for (auto [a, b] : intervals) {
      next.emplace_back(a, a + length);
      next.emplace_back(b - length, b);
    }
    intervals.swap(next);
  }
  std::vector<double> pts;
  pts.reserve(intervals.size() * 2);
  for (auto [a, b] : intervals) {
    pts.push_back(a);
    pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  double res = length;
  if (spec.target_resolution) {
    check_positive(*spec.target_resolution, "resolution");
    if (length > *spec.target_resolution * (1.0 + 1e-12)) {
      fail(ErrorCode::TruncationTooCoarse, "depth-" + std::to_string(depth) +
                                               " intervals are wider than the target resolution");
    }
    res = *spec.target_resolution;
  }
  return PointSet(1, res, std::move(pts));
}

PointSet sample_sequence(const FamilySpec& spec) {
  const double p = spec.parameter;
  check_positive(p, "p");
  const double m_max_real = spec.truncation;
  if (!(m_max_real >= 1.0) || m_max_real != std::floor(m_max_real) ||
      m_max_real > static_cast<double>(kMaxSamplePoints)) {
    fail(ErrorCode::InvalidParameter, "mMax must be a positive integer");
  }
  const auto m_max = static_cast<long long>(m_max_real);
  std::vector<double> pts{0.0};
  for (long long m = 1; m <= m_max; ++m) pts.push_back(std::pow(static_cast<double>(m), -p));

  const double tail = std::pow(m_max_real, -p);
  double res = tail;
  if (spec.target_resolution) {
    res = *spec.target_resolution;
    check_positive(res, "resolution");
    if (tail > res * (1.0 + 1e-12)) {
      const double gap = tail - std::pow(m_max_real + 1.0, -p);
      if (gap > 0.5 * res) {
        fail(ErrorCode::TruncationTooCoarse, "tail [0, mMax^-p] is wider than the resolution");
      }
      const double h = 0.5 * res;
      const auto steps = static_cast<long long>(std::floor(tail / h));
      if (static_cast<std::size_t>(steps) > kMaxSamplePoints) {
        fail(ErrorCode::InvalidParameter, "tail fill would exceed the sample size limit");
      }
      for (long long i = 1; i < steps; ++i) pts.push_back(static_cast<double>(i) * h);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return PointSet(1, res, std::move(pts));
}

}  // namespace

PointSet sample_family(const FamilySpec& spec) {
  switch (spec.kind) {
    case FamilyKind::PolySpiral:
    case FamilyKind::LogSpiral:
      return sample_spiral(spec);
    case FamilyKind::Cantor:
      return sample_cantor(spec);
    case FamilyKind::SequenceSet:
      return sample_sequence(spec);
  }
  fail(ErrorCode::InvalidParameter, "unknown family");
}

double spiral_min_xmax(FamilyKind kind, double parameter, double resolution,
                       double stretch_grade) {
  if (kind != FamilyKind::PolySpiral && kind != FamilyKind::LogSpiral) {
    fail(ErrorCode::InvalidParameter, "only spirals have an xMax");
  }
  check_positive(parameter, "spiral parameter");
  check_positive(resolution, "resolution");
  const Profile source{kind, parameter}, image{kind, parameter / stretch_grade};
  auto ok = [&](double x) { return source.tail_ok(x, resolution) && image.tail_ok(x, resolution); };
  double lo = kind == FamilyKind::PolySpiral ? 1.0 : 0.0;
  double hi = lo + 1.0;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) fail(ErrorCode::TruncationTooCoarse, "no admissible xMax");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-9 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

double oracle_spiral_box_dim(double a) {
  check_positive(a, "a");
  return std::max(2.0 / (1.0 + a), 1.0);
}

double oracle_spiral_spectrum(double a, double theta) {
  check_positive(a, "a");
  if (!(theta > 0.0 && theta < 1.0)) fail(ErrorCode::InvalidParameter, "theta must lie in (0,1)");
  if (a <= 1.0) return std::min(2.0 / ((1.0 + a) * (1.0 - theta)), 2.0);
  return std::min(1.0 + theta / (a * (1.0 - theta)), 2.0);
}

double oracle_spiral_rho(double a) {
  check_positive(a, "a");
  return a / (1.0 + a);
}

SequenceDims oracle_sequence_dims(double p) {
  check_positive(p, "p");
  return {0.0, 1.0 / (1.0 + p), 1.0};
}

}  // namespace alab

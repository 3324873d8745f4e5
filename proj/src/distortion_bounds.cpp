#include "distortion_bounds.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "errors.hpp"

namespace alab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_source(const SpectrumFn& source, double theta) {
  std::optional<double> v = source(theta);
  if (!v) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "source spectrum unavailable at theta=%.6g", theta);
    fail(ErrorCode::SpectrumUndefined, buf);
  }
  return *v;
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) fail(ErrorCode::InvalidParameter, "t must be positive");
}

std::string format_k(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", k);
  return buf;
}

}  // namespace

void validate_context(const ExponentContext& ctx) {
  if (ctx.n < 2) fail(ErrorCode::InvalidParameter, "ambient dimension must be at least 2");
  if (!(ctx.k >= 1.0) || !std::isfinite(ctx.k)) fail(ErrorCode::InvalidParameter, "K must be >= 1");
  if (!(ctx.lambda >= 1.0) || !std::isfinite(ctx.lambda)) fail(ErrorCode::InvalidParameter, "lambda must be >= 1");
  if (ctx.p && !(*ctx.p > ctx.n)) fail(ErrorCode::InvalidParameter, "p must exceed n");
}

double resolve_p(const ExponentContext& ctx) {
  validate_context(ctx);
  if (ctx.p) return *ctx.p;
  if (ctx.k == 1.0) return kInf;
  if (ctx.n == 2) return 2.0 * ctx.k / (ctx.k - 1.0);
  fail(ErrorCode::InvalidParameter, "p must be supplied when n >= 3");
}

double lambda_p_lower(int n, double k, double lambda) {
  if (n < 2 || !(k >= 1.0) || !(lambda >= 1.0)) fail(ErrorCode::InvalidParameter, "need n >= 2, K >= 1, lambda >= 1");
  const double lk = lambda * k;
  return lk == 1.0 ? kInf : n * lk / (lk - 1.0);
}

double resolve_inner_p(const ExponentContext& ctx, std::optional<double> inner_p) {
  validate_context(ctx);
  if (inner_p) {
    if (!(*inner_p > ctx.n)) fail(ErrorCode::InvalidParameter, "inner p must exceed n");
    return *inner_p;
  }
  if (ctx.n == 2) return resolve_p(ctx);
  return lambda_p_lower(ctx.n, std::pow(ctx.k, ctx.n - 1), ctx.lambda);
}

double theta_of_t(double t) {
  check_t(t);
  return 1.0 / (1.0 + t);
}

double symmetric_coeff(const ExponentContext& ctx) {
  const double p = resolve_p(ctx);
  return std::isinf(p) ? 1.0 : 1.0 - ctx.n / p;
}

double beta_upper(double alpha, const ExponentContext& ctx) {
  const double p = resolve_p(ctx);
  if (!(alpha > 0.0) || alpha > ctx.n) fail(ErrorCode::InvalidParameter, "alpha must lie in (0, n]");
  if (std::isinf(p)) return alpha;
  return p * alpha / (p - ctx.n + alpha);
}

double beta_lower(double alpha, const ExponentContext& ctx, std::optional<double> inner_p) {
  const double p = resolve_inner_p(ctx, inner_p);
  if (!(alpha > 0.0) || alpha > ctx.n) fail(ErrorCode::InvalidParameter, "alpha must lie in (0, n]");
  if (std::isinf(p)) return alpha;
  return (p - ctx.n) * alpha / (p - alpha);
}

double transform_dim(double d, double coeff, int n) {
  if (!(d >= 0.0) || d > n) fail(ErrorCode::InvalidParameter, "dimension outside [0, n]");
  if (!(coeff > 0.0) || !std::isfinite(coeff)) fail(ErrorCode::InvalidParameter, "coefficient must be positive");
  if (d == 0.0) return 0.0;
  const double inv = coeff * (1.0 / d - 1.0 / n) + 1.0 / n;
  return 1.0 / inv;
}

BoundPair spectrum_bounds(double t, const ExponentContext& ctx, const SpectrumFn& source,
                          std::optional<double> inner_p) {
  check_t(t);
  const double outer = symmetric_coeff(ctx);
  const double pi = resolve_inner_p(ctx, inner_p);
  const double inner = std::isinf(pi) ? 1.0 : 1.0 / (1.0 - ctx.n / pi);
  const double d_up = require_source(source, theta_of_t(t / ctx.k));
  const double d_low = require_source(source, theta_of_t(ctx.k * t));
  return {transform_dim(d_low, inner, ctx.n), transform_dim(d_up, outer, ctx.n)};
}

BoundPair spectrum_bounds_lambda(double t, const ExponentContext& ctx, const SpectrumFn& source,
                                 std::optional<double> k_inner) {
  check_t(t);
  validate_context(ctx);
  const double ki = k_inner ? *k_inner : std::pow(ctx.k, ctx.n - 1);
  if (!(ki >= 1.0)) fail(ErrorCode::InvalidParameter, "inner dilatation must be >= 1");
  const double d_up = require_source(source, theta_of_t(t / ctx.k));
  const double d_low = require_source(source, theta_of_t(ctx.k * t));
  return {transform_dim(d_low, ctx.lambda * ki, ctx.n),
          transform_dim(d_up, 1.0 / (ctx.lambda * ctx.k), ctx.n)};
}

BoundPair assouad_bounds(double alpha, const ExponentContext& ctx, std::optional<double> inner_p) {
  validate_context(ctx);
  if (!(alpha > 0.0) || !(alpha < ctx.n)) fail(ErrorCode::InvalidParameter, "alpha must lie in (0, n)");
  return {beta_lower(alpha, ctx, inner_p), beta_upper(alpha, ctx)};
}

BoundPair assouad_bounds_lambda(double alpha, const ExponentContext& ctx, std::optional<double> k_inner) {
  validate_context(ctx);
  if (!(alpha > 0.0) || !(alpha < ctx.n)) fail(ErrorCode::InvalidParameter, "alpha must lie in (0, n)");
  const double ki = k_inner ? *k_inner : std::pow(ctx.k, ctx.n - 1);
  if (!(ki >= 1.0)) fail(ErrorCode::InvalidParameter, "inner dilatation must be >= 1");
  return {transform_dim(alpha, ctx.lambda * ki, ctx.n), transform_dim(alpha, 1.0 / (ctx.lambda * ctx.k), ctx.n)};
}

double biholder_upper(double theta, double k, double source_at, int n) {
  if (!(k >= 1.0)) fail(ErrorCode::InvalidParameter, "K must be >= 1");
  if (!(theta > 0.0)) fail(ErrorCode::InvalidParameter, "theta must be positive");
  if (theta >= 1.0 / (k * k)) fail(ErrorCode::ThetaOutOfRange, "bi-Holder bound needs theta < 1/K^2");
  const double v = k * (1.0 - theta / (k * k)) / (1.0 - theta) * source_at;
  return std::min(v, static_cast<double>(n));
}

double ours_upper(double t, double k, double d) {
  check_t(t);
  if (!(k >= 1.0)) fail(ErrorCode::InvalidParameter, "K must be >= 1");
  if (!(d >= 0.0) || d > 2.0) fail(ErrorCode::InvalidParameter, "d must lie in [0, 2]");
  return k * d / (1.0 + 0.5 * (k - 1.0) * d);
}

BoundComparison compare_bounds(double t, double k, const SpectrumFn& source) {
  BoundComparison c;
  c.t = t;
  c.k = k;
  c.theta = theta_of_t(t);
  c.d = require_source(source, theta_of_t(t / k));
  c.ours = ours_upper(t, k, c.d);
  c.theta_below_inverse_k2 = c.theta < 1.0 / (k * k);
  c.theta_below_half_d = c.theta <= 0.5 * c.d;
  c.hypotheses_hold = c.theta_below_inverse_k2 && c.theta_below_half_d;
  if (c.theta_below_inverse_k2) {
    c.biholder = biholder_upper(c.theta, k, require_source(source, c.theta / (k * k)));
    c.ours_not_worse = c.ours <= *c.biholder + 1e-12;
  }
  if (!c.theta_below_inverse_k2) {
    c.note = "biholder inapplicable: theta(t) >= 1/K^2";
  } else if (!c.theta_below_half_d) {
    c.note = "hypothesis theta(t) <= d/2 fails; no ordering is guaranteed";
  } else {
    c.note = c.ours_not_worse ? "ours <= biholder" : "ours > biholder";
  }
  return c;
}

Classification classify_spirals(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorCode::InvalidParameter, "spiral exponents must be positive");
  }
  Classification c;
  c.via_inverse = a < b;
  c.dilatation = c.via_inverse ? b / a : a / b;
  c.witness = c.via_inverse ? "radialinv:K=" + format_k(c.dilatation) : "radial:K=" + format_k(c.dilatation);
  if (c.dilatation == 1.0) c.witness = "identity";
  return c;
}

}  // namespace alab

#pragma once

#include <functional>
#include <optional>
#include <string>

namespace alab {

/// Ambient dimension, dilatation and higher integrability exponent of a
/// quasiconformal map. In the plane p defaults to 2K/(K-1) (infinite for
/// K = 1); for n >= 3 it must be supplied.
struct ExponentContext {
  int n = 2;
  double k = 1.0;
  std::optional<double> p;
  double lambda = 1.0;
};

void validate_context(const ExponentContext& ctx);
/// The outer exponent in effect (+inf for conformal maps).
double resolve_p(const ExponentContext& ctx);
/// The exponent used for the inverse map: `inner_p` when given, the planar
/// exponent when n = 2, else the lambda-form bound for dilatation K^(n-1).
double resolve_inner_p(const ExponentContext& ctx, std::optional<double> inner_p);
/// n * lambda * K / (lambda * K - 1), a lower bound for the outer exponent.
double lambda_p_lower(int n, double k, double lambda);

double theta_of_t(double t);

/// 1 - n/p (1 when p is infinite).
double symmetric_coeff(const ExponentContext& ctx);
/// p alpha / (p - n + alpha).
double beta_upper(double alpha, const ExponentContext& ctx);
/// (p' - n) alpha / (p' - alpha) with p' the inner exponent.
double beta_lower(double alpha, const ExponentContext& ctx, std::optional<double> inner_p = {});

/// Solves 1/d' - 1/n = coeff (1/d - 1/n) for d', with 1/0 = infinity.
double transform_dim(double d, double coeff, int n);

/// Bounds on the image dimension (not on its reciprocal).
struct BoundPair {
  double lower = 0.0;
  double upper = 0.0;
};

using SpectrumFn = std::function<std::optional<double>(double theta)>;

/// Image spectrum bounds at theta(t) from the source spectrum at
/// theta(Kt) (lower) and theta(t/K) (upper).
BoundPair spectrum_bounds(double t, const ExponentContext& ctx, const SpectrumFn& source,
                          std::optional<double> inner_p = {});
/// Same, with coefficients 1/(lambda K) and lambda K_I (K_I defaults to K^(n-1)).
BoundPair spectrum_bounds_lambda(double t, const ExponentContext& ctx, const SpectrumFn& source,
                                 std::optional<double> k_inner = {});

BoundPair assouad_bounds(double alpha, const ExponentContext& ctx, std::optional<double> inner_p = {});
BoundPair assouad_bounds_lambda(double alpha, const ExponentContext& ctx,
                                std::optional<double> k_inner = {});

/// K (1 - theta/K^2) / (1 - theta) times the source value at theta/K^2,
/// capped at n.
double biholder_upper(double theta, double k, double source_at, int n = 2);
/// K d / (1 + (K-1) d / 2) for the source value d at theta(t/K).
double ours_upper(double t, double k, double d);

struct BoundComparison {
  double t = 0.0;
  double theta = 0.0;
  double k = 1.0;
  double d = 0.0;
  double ours = 0.0;
  std::optional<double> biholder;
  bool theta_below_inverse_k2 = false;
  bool theta_below_half_d = false;
  bool hypotheses_hold = false;
  bool ours_not_worse = false;
  std::string note;
};

BoundComparison compare_bounds(double t, double k, const SpectrumFn& source);

struct Classification {
  double dilatation = 1.0;
  bool via_inverse = false;
  std::string witness;
};

/// Least dilatation of a planar quasiconformal map taking S_a onto S_b.
Classification classify_spirals(double a, double b);

}  // namespace alab

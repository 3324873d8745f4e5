#include "assouad_lab/assouad_lab.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include <json.hpp>

#include "distortion_bounds.hpp"
#include "errors.hpp"
#include "estimators.hpp"
#include "families.hpp"
#include "multiscale_index.hpp"
#include "planar_map.hpp"
#include "point_set.hpp"
#include "report.hpp"

struct al_pointset {
  alab::PointSet ps;
};
struct al_index {
  alab::MultiScaleIndex idx;
};
struct al_spectrum {
  alab::SpectrumEstimate est;
};
struct al_map {
  alab::PlanarMap map;
};

namespace {

using alab::ErrorCode;

static_assert(static_cast<int>(ErrorCode::InvalidArgument) == AL_ERR_INVALID_ARGUMENT);
static_assert(static_cast<int>(ErrorCode::Io) == AL_ERR_IO);

thread_local std::string g_last_error;

template <class F>
al_status guard(F&& body) {
  try {
    body();
    g_last_error.clear();
    return AL_OK;
  } catch (const alab::Error& e) {
    g_last_error = e.what();
    return static_cast<al_status>(e.code());
  } catch (const nlohmann::json::exception& e) {
    g_last_error = std::string("Parse: ") + e.what();
    return AL_ERR_PARSE;
  } catch (const std::bad_alloc&) {
    g_last_error = "Internal: out of memory";
    return AL_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = std::string("Internal: ") + e.what();
    return AL_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) alab::fail(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::optional<double> positive_or_none(double v) {
  return v > 0.0 ? std::optional<double>(v) : std::nullopt;
}

alab::ScaleWindow window_or_default(const al_index* idx, const al_window* w) {
  return w ? alab::ScaleWindow{w->r_min, w->r_max} : alab::default_window(idx->idx);
}

alab::EstimatorOptions options_or_default(const al_estimator_options* o) {
  alab::EstimatorOptions opts;
  if (o && o->center_budget > 0) opts.center_budget = o->center_budget;
  if (o && o->radius_scale > 0.0) opts.radius_scale = o->radius_scale;
  return opts;
}

alab::ExponentContext context(const al_exponent_context* c) {
  need(c, "context");
  alab::ExponentContext ctx;
  ctx.n = c->n;
  ctx.k = c->k;
  ctx.p = positive_or_none(c->p);
  ctx.lambda = c->lambda < 1.0 ? 1.0 : c->lambda;
  return ctx;
}

alab::SpectrumFn callback_fn(al_spectrum_callback cb, void* user) {
  need(reinterpret_cast<const void*>(cb), "spectrum callback");
  return [cb, user](double theta) -> std::optional<double> {
    const double v = cb(theta, user);
    if (std::isnan(v)) return std::nullopt;
    return v;
  };
}

alab::FamilyKind family_kind(al_family_kind k) {
  switch (k) {
    case AL_FAMILY_POLY_SPIRAL: return alab::FamilyKind::PolySpiral;
    case AL_FAMILY_LOG_SPIRAL: return alab::FamilyKind::LogSpiral;
    case AL_FAMILY_CANTOR: return alab::FamilyKind::Cantor;
    case AL_FAMILY_SEQUENCE: return alab::FamilyKind::SequenceSet;
  }
  alab::fail(ErrorCode::InvalidParameter, "unknown family kind");
}

alab::VerifyOptions verify_options(const char* text) {
  need(text, "options");
  const auto j = nlohmann::json::parse(text);
  alab::VerifyOptions o;
  o.a = j.value("a", o.a);
  o.map_spec = j.value("map", o.map_spec);
  if (j.contains("t") && !j["t"].is_null()) o.t = j["t"].get<double>();
  o.epsilon = j.value("eps", o.epsilon);
  o.resolution = j.value("resolution", o.resolution);
  if (j.contains("xmax") && !j["xmax"].is_null()) o.xmax = j["xmax"].get<double>();
  o.theta_lo = j.value("theta_lo", o.theta_lo);
  o.theta_hi = j.value("theta_hi", o.theta_hi);
  o.theta_step = j.value("theta_step", o.theta_step);
  o.source_step = j.value("source_step", o.source_step);
  o.estimator.center_budget = j.value("center_budget", o.estimator.center_budget);
  o.estimator.radius_scale = j.value("radius_scale", o.estimator.radius_scale);
  return o;
}

}  // namespace

extern "C" {

const char* al_status_name(al_status status) {
  if (status == AL_OK) return "Ok";
  if (status == AL_ERR_INTERNAL) return "Internal";
  if (status > AL_OK && status < AL_ERR_INTERNAL) {
    return alab::error_code_name(static_cast<ErrorCode>(status));
  }
  return "Unknown";
}

const char* al_last_error(void) { return g_last_error.c_str(); }

void al_string_free(char* s) { std::free(s); }

al_status al_pointset_new(int dim, double resolution, const double* coords, size_t count,
                          const double* params, al_pointset** out) {
  return guard([&] {
    need(out, "out");
    if (count > 0) need(coords, "coords");
    if (dim < 1) alab::fail(ErrorCode::InvalidArgument, "dimension must be positive");
    std::vector<double> c(coords, coords + count * static_cast<size_t>(dim));
    std::vector<double> p;
    if (params) p.assign(params, params + count);
    *out = new al_pointset{alab::PointSet(dim, resolution, std::move(c), std::move(p))};
  });
}

al_status al_pointset_read(const char* path, double resolution, al_pointset** out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new al_pointset{alab::read_points(path, positive_or_none(resolution))};
  });
}

al_status al_pointset_parse(const char* text, double resolution, al_pointset** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new al_pointset{alab::parse_points(text, positive_or_none(resolution))};
  });
}

al_status al_pointset_write(const al_pointset* ps, const char* path) {
  return guard([&] {
    need(ps, "point set");
    need(path, "path");
    alab::write_points(ps->ps, path);
  });
}

al_status al_pointset_to_csv(const al_pointset* ps, char** out) {
  return guard([&] {
    need(ps, "point set");
    need(out, "out");
    *out = dup_string(alab::points_to_csv(ps->ps));
  });
}

al_status al_pointset_merge(const al_pointset* a, const al_pointset* b, al_pointset** out) {
  return guard([&] {
    need(a, "first point set");
    need(b, "second point set");
    need(out, "out");
    *out = new al_pointset{alab::merge(a->ps, b->ps)};
  });
}

void al_pointset_free(al_pointset* ps) { delete ps; }
int al_pointset_dim(const al_pointset* ps) { return ps ? ps->ps.dim() : 0; }
size_t al_pointset_size(const al_pointset* ps) { return ps ? ps->ps.size() : 0; }
double al_pointset_resolution(const al_pointset* ps) { return ps ? ps->ps.resolution() : 0.0; }
const double* al_pointset_coords(const al_pointset* ps) { return ps ? ps->ps.coords().data() : nullptr; }
const double* al_pointset_params(const al_pointset* ps) {
  return ps && ps->ps.has_params() ? ps->ps.params().data() : nullptr;
}

al_status al_family_sample(const al_family_spec* spec, al_pointset** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    alab::FamilySpec s;
    s.kind = family_kind(spec->kind);
    s.parameter = spec->parameter;
    s.truncation = spec->truncation;
    s.target_resolution = positive_or_none(spec->resolution);
    s.stretch_grade = spec->stretch_grade < 1.0 ? 1.0 : spec->stretch_grade;
    *out = new al_pointset{alab::sample_family(s)};
  });
}

al_status al_spiral_min_xmax(al_family_kind kind, double parameter, double resolution,
                             double stretch_grade, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::spiral_min_xmax(family_kind(kind), parameter, resolution,
                                 stretch_grade < 1.0 ? 1.0 : stretch_grade);
  });
}

al_status al_oracle_spiral_box_dim(double a, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::oracle_spiral_box_dim(a);
  });
}

al_status al_oracle_spiral_spectrum(double a, double theta, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::oracle_spiral_spectrum(a, theta);
  });
}

al_status al_oracle_spiral_rho(double a, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::oracle_spiral_rho(a);
  });
}

al_status al_oracle_sequence_dims(double p, double* hausdorff, double* box, double* assouad) {
  return guard([&] {
    const auto d = alab::oracle_sequence_dims(p);
    if (hausdorff) *hausdorff = d.hausdorff;
    if (box) *box = d.box;
    if (assouad) *assouad = d.assouad;
  });
}

al_status al_index_build(const al_pointset* ps, int max_level, al_index** out) {
  return guard([&] {
    need(ps, "point set");
    need(out, "out");
    const int level = max_level < 0 ? alab::MultiScaleIndex::max_level_for(ps->ps) : max_level;
    *out = new al_index{alab::MultiScaleIndex::build(ps->ps, level)};
  });
}

void al_index_free(al_index* idx) { delete idx; }
int al_index_max_level(const al_index* idx) { return idx ? idx->idx.max_level() : -1; }

al_status al_index_occupied_count(const al_index* idx, int level, size_t* out) {
  return guard([&] {
    need(idx, "index");
    need(out, "out");
    *out = idx->idx.occupied_count(level);
  });
}

al_status al_index_local_count(const al_index* idx, const double* x, double radius, int m, size_t* out) {
  return guard([&] {
    need(idx, "index");
    need(x, "x");
    need(out, "out");
    *out = idx->idx.local_dyadic_count({x, static_cast<size_t>(idx->idx.dim())}, radius, m);
  });
}

al_status al_index_stats_json(const al_index* idx, char** out) {
  return guard([&] {
    need(idx, "index");
    need(out, "out");
    *out = dup_string(alab::index_stats_json(idx->idx).dump());
  });
}

al_status al_default_window(const al_index* idx, al_window* out) {
  return guard([&] {
    need(idx, "index");
    need(out, "out");
    const auto w = alab::default_window(idx->idx);
    *out = {w.r_min, w.r_max};
  });
}

al_status al_estimate_box(const al_index* idx, const al_window* window, double* value, char** json) {
  return guard([&] {
    need(idx, "index");
    const auto est = alab::estimate_box_dim(idx->idx, window_or_default(idx, window));
    if (value) *value = est.value;
    if (json) *json = dup_string(alab::dim_estimate_json(est).dump());
  });
}

al_status al_estimate_assouad(const al_index* idx, const al_window* window,
                              const al_estimator_options* options, double* value, char** json) {
  return guard([&] {
    need(idx, "index");
    const auto est =
        alab::estimate_assouad(idx->idx, window_or_default(idx, window), options_or_default(options));
    if (value) *value = est.value;
    if (json) *json = dup_string(alab::dim_estimate_json(est).dump());
  });
}

al_status al_estimate_quasi_assouad(const al_index* idx, const al_window* window,
                                    const al_estimator_options* options, double theta_hi,
                                    double* value, char** json) {
  return guard([&] {
    need(idx, "index");
    const auto est = alab::estimate_quasi_assouad(idx->idx, window_or_default(idx, window),
                                                  options_or_default(options), theta_hi);
    if (value) *value = est.value;
    if (json) *json = dup_string(alab::dim_estimate_json(est).dump());
  });
}

al_status al_estimate_spectrum(const al_index* idx, const double* theta, size_t count,
                               const al_window* window, const al_estimator_options* options,
                               al_spectrum** out) {
  return guard([&] {
    need(idx, "index");
    need(out, "out");
    if (count > 0) need(theta, "theta");
    *out = new al_spectrum{alab::estimate_spectrum(idx->idx, {theta, count}, window_or_default(idx, window),
                                                   options_or_default(options))};
  });
}

void al_spectrum_free(al_spectrum* spec) { delete spec; }
size_t al_spectrum_size(const al_spectrum* spec) { return spec ? spec->est.theta.size() : 0; }

int al_spectrum_at(const al_spectrum* spec, size_t i, double* theta, double* value, double* regularized) {
  if (!spec || i >= spec->est.theta.size()) return 0;
  if (theta) *theta = spec->est.theta[i];
  if (!spec->est.values[i]) {
    if (value) *value = std::nan("");
    if (regularized) *regularized = std::nan("");
    return 0;
  }
  if (value) *value = *spec->est.values[i];
  if (regularized) *regularized = *spec->est.regularized[i];
  return 1;
}

al_status al_spectrum_to_json(const al_spectrum* spec, char** out) {
  return guard([&] {
    need(spec, "spectrum");
    need(out, "out");
    *out = dup_string(alab::spectrum_json(spec->est).dump());
  });
}

al_status al_spectrum_to_csv(const al_spectrum* spec, char** out) {
  return guard([&] {
    need(spec, "spectrum");
    need(out, "out");
    *out = dup_string(alab::spectrum_csv(spec->est));
  });
}

al_status al_estimate_rho(const al_spectrum* spec, double epsilon, double* out) {
  return guard([&] {
    need(spec, "spectrum");
    need(out, "out");
    *out = alab::estimate_rho(spec->est, spec->est.ambient_dim, epsilon);
  });
}

al_status al_map_parse(const char* spec, al_map** out) {
  return guard([&] {
    need(spec, "spec");
    need(out, "out");
    *out = new al_map{alab::parse_map(spec)};
  });
}

void al_map_free(al_map* map) { delete map; }
double al_map_dilatation(const al_map* map) { return map ? map->map.dilatation_bound() : 0.0; }

al_status al_map_to_string(const al_map* map, char** out) {
  return guard([&] {
    need(map, "map");
    need(out, "out");
    *out = dup_string(map->map.to_string());
  });
}

al_status al_map_compose(const al_map* first, const al_map* second, al_map** out) {
  return guard([&] {
    need(first, "first map");
    need(second, "second map");
    need(out, "out");
    *out = new al_map{alab::compose(first->map, second->map)};
  });
}

al_status al_map_inverse(const al_map* map, al_map** out) {
  return guard([&] {
    need(map, "map");
    need(out, "out");
    *out = new al_map{map->map.inverse()};
  });
}

al_status al_map_eval(const al_map* map, double re, double im, double* out_re, double* out_im) {
  return guard([&] {
    need(map, "map");
    need(out_re, "out_re");
    need(out_im, "out_im");
    const auto w = map->map(alab::Complex{re, im});
    *out_re = w.real();
    *out_im = w.imag();
  });
}

al_status al_map_apply(const al_map* map, const al_pointset* ps, al_pointset** out) {
  return guard([&] {
    need(map, "map");
    need(ps, "point set");
    need(out, "out");
    *out = new al_pointset{alab::apply_map(map->map, ps->ps)};
  });
}

al_status al_map_bi_holder(const al_map* map, double* alpha, double* beta) {
  return guard([&] {
    need(map, "map");
    const auto e = alab::bi_holder_exponents(map->map);
    if (alpha) *alpha = e.alpha;
    if (beta) *beta = e.beta;
  });
}

al_status al_theta_of_t(double t, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::theta_of_t(t);
  });
}

al_status al_symmetric_coeff(const al_exponent_context* ctx, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::symmetric_coeff(context(ctx));
  });
}

al_status al_beta_upper(double alpha, const al_exponent_context* ctx, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::beta_upper(alpha, context(ctx));
  });
}

al_status al_beta_lower(double alpha, const al_exponent_context* ctx, double inner_p, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::beta_lower(alpha, context(ctx), positive_or_none(inner_p));
  });
}

al_status al_spectrum_bounds(double t, const al_exponent_context* ctx, al_spectrum_callback source,
                             void* user, double inner_p, double* lower, double* upper) {
  return guard([&] {
    const auto b = alab::spectrum_bounds(t, context(ctx), callback_fn(source, user), positive_or_none(inner_p));
    if (lower) *lower = b.lower;
    if (upper) *upper = b.upper;
  });
}

al_status al_assouad_bounds(double alpha, const al_exponent_context* ctx, double inner_p, double* lower,
                            double* upper) {
  return guard([&] {
    const auto b = alab::assouad_bounds(alpha, context(ctx), positive_or_none(inner_p));
    if (lower) *lower = b.lower;
    if (upper) *upper = b.upper;
  });
}

al_status al_assouad_bounds_lambda(double alpha, const al_exponent_context* ctx, double k_inner,
                                   double* lower, double* upper) {
  return guard([&] {
    const auto b = alab::assouad_bounds_lambda(alpha, context(ctx), positive_or_none(k_inner));
    if (lower) *lower = b.lower;
    if (upper) *upper = b.upper;
  });
}

al_status al_biholder_upper(double theta, double k, double source_at, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::biholder_upper(theta, k, source_at);
  });
}

al_status al_ours_upper(double t, double k, double d, double* out) {
  return guard([&] {
    need(out, "out");
    *out = alab::ours_upper(t, k, d);
  });
}

al_status al_compare_bounds(double t, double k, al_spectrum_callback source, void* user, double* ours,
                            double* biholder, int* hypotheses_hold, int* ours_not_worse) {
  return guard([&] {
    const auto c = alab::compare_bounds(t, k, callback_fn(source, user));
    if (ours) *ours = c.ours;
    if (biholder) *biholder = c.biholder ? *c.biholder : std::nan("");
    if (hypotheses_hold) *hypotheses_hold = c.hypotheses_hold ? 1 : 0;
    if (ours_not_worse) *ours_not_worse = c.ours_not_worse ? 1 : 0;
  });
}

al_status al_classify_spirals(double a, double b, double* dilatation, int* via_inverse, char** witness) {
  return guard([&] {
    const auto c = alab::classify_spirals(a, b);
    if (dilatation) *dilatation = c.dilatation;
    if (via_inverse) *via_inverse = c.via_inverse ? 1 : 0;
    if (witness) *witness = dup_string(c.witness);
  });
}

al_status al_bounds_report_json(const char* request_json, char** out) {
  return guard([&] {
    need(request_json, "request");
    need(out, "out");
    *out = dup_string(alab::bounds_report(nlohmann::json::parse(request_json)).dump());
  });
}

al_status al_verify_run(const char* options_json, char** report_json, int* passed) {
  return guard([&] {
    const auto rep = alab::run_verify(verify_options(options_json));
    if (report_json) *report_json = dup_string(rep.to_json().dump());
    if (passed) *passed = rep.passed ? 1 : 0;
  });
}

al_status al_verify_run_with_oracle(const char* options_json, al_spectrum_callback oracle, void* user,
                                    char** report_json, int* passed) {
  return guard([&] {
    const auto rep = alab::run_verify(verify_options(options_json), callback_fn(oracle, user));
    if (report_json) *report_json = dup_string(rep.to_json().dump());
    if (passed) *passed = rep.passed ? 1 : 0;
  });
}

}  // extern "C"

/* C interface to the assouad_lab library.
 *
 * Every fallible call returns an al_status; on failure al_last_error()
 * describes the problem (thread-local, valid until the next call on the
 * same thread). Objects are opaque and released with their _free function.
 * Strings returned through char** are released with al_string_free.
 */
#ifndef ASSOUAD_LAB_H
#define ASSOUAD_LAB_H

#include <stddef.h>

#if defined(_WIN32)
#define AL_API __declspec(dllexport)
#else
#define AL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum al_status {
  AL_OK = 0,
  AL_ERR_INVALID_ARGUMENT,
  AL_ERR_EMPTY_SET,
  AL_ERR_RESOLUTION_EXCEEDED,
  AL_ERR_LEVEL_OUT_OF_RANGE,
  AL_ERR_SCALE_BELOW_RESOLUTION,
  AL_ERR_WINDOW_TOO_NARROW,
  AL_ERR_INVALID_PARAMETER,
  AL_ERR_TRUNCATION_TOO_COARSE,
  AL_ERR_INVALID_DILATATION,
  AL_ERR_POLE_PROXIMITY,
  AL_ERR_DIMENSION_MISMATCH,
  AL_ERR_SPECTRUM_UNDEFINED,
  AL_ERR_THETA_OUT_OF_RANGE,
  AL_ERR_PARSE,
  AL_ERR_IO,
  AL_ERR_INTERNAL
} al_status;

typedef struct al_pointset al_pointset;
typedef struct al_index al_index;
typedef struct al_spectrum al_spectrum;
typedef struct al_map al_map;

AL_API const char* al_status_name(al_status status);
AL_API const char* al_last_error(void);
AL_API void al_string_free(char* s);

/* ---- point sets ---- */

/* coords holds count*dim values row-major; params may be NULL. */
AL_API al_status al_pointset_new(int dim, double resolution, const double* coords, size_t count,
                                 const double* params, al_pointset** out);
/* resolution <= 0 takes the value declared in the file. */
AL_API al_status al_pointset_read(const char* path, double resolution, al_pointset** out);
AL_API al_status al_pointset_parse(const char* text, double resolution, al_pointset** out);
AL_API al_status al_pointset_write(const al_pointset* ps, const char* path);
AL_API al_status al_pointset_to_csv(const al_pointset* ps, char** out);
AL_API al_status al_pointset_merge(const al_pointset* a, const al_pointset* b, al_pointset** out);
AL_API void al_pointset_free(al_pointset* ps);
AL_API int al_pointset_dim(const al_pointset* ps);
AL_API size_t al_pointset_size(const al_pointset* ps);
AL_API double al_pointset_resolution(const al_pointset* ps);
AL_API const double* al_pointset_coords(const al_pointset* ps);
/* NULL when the set carries no curve parameters. */
AL_API const double* al_pointset_params(const al_pointset* ps);

/* ---- example families ---- */

typedef enum al_family_kind {
  AL_FAMILY_POLY_SPIRAL = 0,
  AL_FAMILY_LOG_SPIRAL,
  AL_FAMILY_CANTOR,
  AL_FAMILY_SEQUENCE
} al_family_kind;

typedef struct al_family_spec {
  al_family_kind kind;
  double parameter;     /* a, c, contraction ratio or p */
  double truncation;    /* xMax, xMax, depth or mMax */
  double resolution;    /* <= 0: natural resolution (Cantor, sequence only) */
  double stretch_grade; /* spirals; values < 1 mean 1 */
} al_family_spec;

AL_API al_status al_family_sample(const al_family_spec* spec, al_pointset** out);
AL_API al_status al_spiral_min_xmax(al_family_kind kind, double parameter, double resolution,
                                    double stretch_grade, double* out);
AL_API al_status al_oracle_spiral_box_dim(double a, double* out);
AL_API al_status al_oracle_spiral_spectrum(double a, double theta, double* out);
AL_API al_status al_oracle_spiral_rho(double a, double* out);
AL_API al_status al_oracle_sequence_dims(double p, double* hausdorff, double* box, double* assouad);

/* ---- multiscale index ---- */

/* max_level < 0 picks the deepest level allowed by the resolution. */
AL_API al_status al_index_build(const al_pointset* ps, int max_level, al_index** out);
AL_API void al_index_free(al_index* idx);
AL_API int al_index_max_level(const al_index* idx);
AL_API al_status al_index_occupied_count(const al_index* idx, int level, size_t* out);
AL_API al_status al_index_local_count(const al_index* idx, const double* x, double radius, int m,
                                      size_t* out);
AL_API al_status al_index_stats_json(const al_index* idx, char** out);

/* ---- estimators ---- */

typedef struct al_window {
  double r_min;
  double r_max;
} al_window;

typedef struct al_estimator_options {
  int center_budget;   /* <= 0: 256 */
  double radius_scale; /* <= 0: 1 */
} al_estimator_options;

/* A NULL window or options pointer selects the defaults. json may be NULL. */
AL_API al_status al_default_window(const al_index* idx, al_window* out);
AL_API al_status al_estimate_box(const al_index* idx, const al_window* window, double* value,
                                 char** json);
AL_API al_status al_estimate_assouad(const al_index* idx, const al_window* window,
                                     const al_estimator_options* options, double* value, char** json);
AL_API al_status al_estimate_quasi_assouad(const al_index* idx, const al_window* window,
                                           const al_estimator_options* options, double theta_hi,
                                           double* value, char** json);
AL_API al_status al_estimate_spectrum(const al_index* idx, const double* theta, size_t count,
                                      const al_window* window, const al_estimator_options* options,
                                      al_spectrum** out);
AL_API void al_spectrum_free(al_spectrum* spec);
AL_API size_t al_spectrum_size(const al_spectrum* spec);
/* Returns 1 when a value exists at grid index i, 0 when it is absent. */
AL_API int al_spectrum_at(const al_spectrum* spec, size_t i, double* theta, double* value,
                          double* regularized);
AL_API al_status al_spectrum_to_json(const al_spectrum* spec, char** out);
AL_API al_status al_spectrum_to_csv(const al_spectrum* spec, char** out);
AL_API al_status al_estimate_rho(const al_spectrum* spec, double epsilon, double* out);

/* ---- planar maps ---- */

AL_API al_status al_map_parse(const char* spec, al_map** out);
AL_API void al_map_free(al_map* map);
AL_API double al_map_dilatation(const al_map* map);
AL_API al_status al_map_to_string(const al_map* map, char** out);
/* first, then second */
AL_API al_status al_map_compose(const al_map* first, const al_map* second, al_map** out);
AL_API al_status al_map_inverse(const al_map* map, al_map** out);
AL_API al_status al_map_eval(const al_map* map, double re, double im, double* out_re, double* out_im);
AL_API al_status al_map_apply(const al_map* map, const al_pointset* ps, al_pointset** out);
AL_API al_status al_map_bi_holder(const al_map* map, double* alpha, double* beta);

/* ---- distortion bounds ---- */

typedef struct al_exponent_context {
  int n;         /* ambient dimension >= 2 */
  double k;      /* dilatation >= 1 */
  double p;      /* <= 0: automatic (planar only) */
  double lambda; /* < 1: 1 */
} al_exponent_context;

/* Source spectrum callback; return NaN where the spectrum is unknown. */
typedef double (*al_spectrum_callback)(double theta, void* user);

AL_API al_status al_theta_of_t(double t, double* out);
AL_API al_status al_symmetric_coeff(const al_exponent_context* ctx, double* out);
AL_API al_status al_beta_upper(double alpha, const al_exponent_context* ctx, double* out);
/* inner_p <= 0 selects the default inverse-map exponent. */
AL_API al_status al_beta_lower(double alpha, const al_exponent_context* ctx, double inner_p,
                               double* out);
AL_API al_status al_spectrum_bounds(double t, const al_exponent_context* ctx,
                                    al_spectrum_callback source, void* user, double inner_p,
                                    double* lower, double* upper);
AL_API al_status al_assouad_bounds(double alpha, const al_exponent_context* ctx, double inner_p,
                                   double* lower, double* upper);
/* k_inner <= 0 selects K^(n-1). */
AL_API al_status al_assouad_bounds_lambda(double alpha, const al_exponent_context* ctx,
                                          double k_inner, double* lower, double* upper);
AL_API al_status al_biholder_upper(double theta, double k, double source_at, double* out);
AL_API al_status al_ours_upper(double t, double k, double d, double* out);
/* hypotheses_hold and ours_not_worse are 0/1; biholder is NaN when inapplicable. */
AL_API al_status al_compare_bounds(double t, double k, al_spectrum_callback source, void* user,
                                   double* ours, double* biholder, int* hypotheses_hold,
                                   int* ours_not_worse);
/* witness may be NULL. */
AL_API al_status al_classify_spirals(double a, double b, double* dilatation, int* via_inverse,
                                     char** witness);
AL_API al_status al_bounds_report_json(const char* request_json, char** out);

/* ---- verification harness ---- */

/* options_json keys: a, map, t, eps, resolution, xmax, theta_lo, theta_hi,
 * theta_step, source_step, center_budget, radius_scale. */
AL_API al_status al_verify_run(const char* options_json, char** report_json, int* passed);
/* As al_verify_run, with the image-spectrum oracle supplied by the caller. */
AL_API al_status al_verify_run_with_oracle(const char* options_json, al_spectrum_callback oracle,
                                           void* user, char** report_json, int* passed);

#ifdef __cplusplus
}
#endif

#endif /* ASSOUAD_LAB_H */

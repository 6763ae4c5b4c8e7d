#ifndef GRUSHIN_H
#define GRUSHIN_H

/* C interface to the Grushin-surface library: gauge geometry, graph surfaces
 * with their alpha-normal / curvature / structural function, gauge-ball
 * quadrature, and the batch verification runner. All functions return a
 * status code; grushin_last_error() describes the most recent failure on the
 * calling thread. Handles are opaque and owned by the caller via the matching
 * _destroy call. */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#ifndef GRUSHIN_API
#define GRUSHIN_API __attribute__((visibility("default")))
#endif

typedef enum grushin_status {
  GRUSHIN_OK = 0,
  GRUSHIN_ERR_ARGUMENT = 1, /* malformed input, bad spec string, bad config */
  GRUSHIN_ERR_DOMAIN = 2,   /* point outside the mathematical domain */
  GRUSHIN_ERR_NUMERIC = 3,  /* budget exhausted / singular system */
  GRUSHIN_ERR_IO = 4,       /* unreadable or unwritable file */
  GRUSHIN_ERR_INTERNAL = 5
} grushin_status;

/* Message for the last failing call on this thread; never NULL. */
GRUSHIN_API const char* grushin_last_error(void);

typedef struct grushin_params grushin_params;
typedef struct grushin_surface grushin_surface;
typedef struct grushin_run grushin_run;

/* ---- ambient space -------------------------------------------------------- */

GRUSHIN_API grushin_status grushin_params_create(int n, double alpha, grushin_params** out);
GRUSHIN_API void grushin_params_destroy(grushin_params* p);

/* Gauge rho(x, y) at an ambient point; x has length n. */
GRUSHIN_API grushin_status grushin_gauge(const grushin_params* p, const double* x, double y,
                                         double* rho);
/* Fundamental-solution profile rho^{1-n-alpha} (pole at the origin). */
GRUSHIN_API grushin_status grushin_fundamental_solution(const grushin_params* p, const double* x,
                                                        double y, double* gamma);

/* ---- graph surfaces -------------------------------------------------------- */

/* spec: "flat" | "radial-power:c=<c>,m=<m>" | "monomial:<i,j,..>=<c>;..."
 * domain: "ball:<R>" | "box:<lo...>,<hi...>" (2n numbers) */
GRUSHIN_API grushin_status grushin_surface_create(const grushin_params* p, const char* spec,
                                                  const char* domain, grushin_surface** out);
GRUSHIN_API void grushin_surface_destroy(grushin_surface* s);
/* Canonical name; owned by the handle. */
GRUSHIN_API const char* grushin_surface_name(const grushin_surface* s);

/* Pointwise values at a base point x (length n). */
GRUSHIN_API grushin_status grushin_surface_height(const grushin_surface* s, const double* x,
                                                  double* u);
GRUSHIN_API grushin_status grushin_area_element(const grushin_surface* s, const double* x,
                                                double* v);
/* nu has length n+1: horizontal components then the vertical one. */
GRUSHIN_API grushin_status grushin_normal(const grushin_surface* s, const double* x, double* nu);
GRUSHIN_API grushin_status grushin_mean_curvature(const grushin_surface* s, const double* x,
                                                  double* H);
/* Structural function q_Sigma (sign field of the mean-value comparison). */
GRUSHIN_API grushin_status grushin_q_sigma(const grushin_surface* s, const double* x, double* q);

/* ---- gauge-ball quadrature -------------------------------------------------- */

/* c(r) = r^{-(n+alpha)} * integral of |delta rho|^2 dsigma over the gauge
 * section of radius r; err receives the quadrature error estimate (may be
 * NULL). rel_tol <= 0 picks the default (1e-8). */
GRUSHIN_API grushin_status grushin_profile_value(const grushin_surface* s, double r,
                                                 double rel_tol, double* c, double* err);

/* ---- batch runner ------------------------------------------------------------ */

/* Runs the config at `path`. suites (may be NULL/0) replaces the config's
 * suite selection; out_dir (may be NULL) prefixes relative output paths.
 * exit_code receives 0 (all verdicts pass) or 1 (verdict failure); config
 * errors surface as GRUSHIN_ERR_ARGUMENT instead. */
GRUSHIN_API grushin_status grushin_run_config_file(const char* path, const char* const* suites,
                                                   int nsuites, const char* out_dir,
                                                   int* exit_code, grushin_run** out);
/* Same, but the config text is passed directly; origin names it in errors. */
GRUSHIN_API grushin_status grushin_run_config_text(const char* text, const char* origin,
                                                   const char* const* suites, int nsuites,
                                                   const char* out_dir, int* exit_code,
                                                   grushin_run** out);
/* Report accessors; strings owned by the run handle. */
GRUSHIN_API const char* grushin_run_json(const grushin_run* r);
GRUSHIN_API const char* grushin_run_csv(const grushin_run* r);
GRUSHIN_API const char* grushin_run_json_path(const grushin_run* r);
GRUSHIN_API const char* grushin_run_csv_path(const grushin_run* r);
GRUSHIN_API void grushin_run_destroy(grushin_run* r);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRUSHIN_H */

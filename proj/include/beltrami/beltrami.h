/*
 * beltrami: construction, verification and flow tracing of Beltrami
 * fields (eigenvectors of the curl operator).
 *
 * C interface over the C++ core. Objects are opaque handles created and
 * released by bf_* functions; every fallible call returns a bf_status and
 * leaves a human-readable message in bf_last_error() on failure. Handles
 * are immutable after creation and safe to share across threads; the
 * error message is thread-local.
 *
 * Expressions use the grammar
 *   expr   := term (('+'|'-') term)*
 *   term   := factor (('*'|'/') factor)*
 *   factor := base ('^' int_or_rational)?
 *   base   := number | var | func '(' expr (',' expr)? ')' | '(' expr ')' | '-' base
 * with func in {sin, cos, exp, log, sqrt, atan, atan2} and var in
 * {x, y, z} (profile expressions use the single variable s).
 */

#ifndef BELTRAMI_BELTRAMI_H
#define BELTRAMI_BELTRAMI_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BF_API __declspec(dllexport)
#else
#define BF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bf_status {
  BF_OK = 0,
  BF_ERR_PARSE = 1,             /* syntax error (byte offset in the message) */
  BF_ERR_DOMAIN = 2,            /* expression undefined at the point */
  BF_ERR_GUARD = 3,             /* point excluded by a domain guard */
  BF_ERR_SCHEMA = 4,            /* spec file violates the schema */
  BF_ERR_INVALID_ARGUMENT = 5,
  BF_ERR_CONDITION_FAILED = 6,  /* construction conditions not met */
  BF_ERR_SIGN_INCONSISTENT = 7, /* Jacobian sign changes across samples */
  BF_ERR_UNKNOWN_ID = 8,
  BF_ERR_IO = 9,
  BF_ERR_STEP_UNDERFLOW = 10,
  BF_ERR_INTERNAL = 11
} bf_status;

typedef enum bf_class {
  BF_CLASS_NONTRIVIAL_BELTRAMI = 0,
  BF_CLASS_COMPLEX_LAMELLAR = 1,
  BF_CLASS_NEITHER = 2,
  BF_CLASS_DEGENERATE = 3
} bf_class;

typedef enum bf_spec_kind {
  BF_SPEC_VECTOR_FIELD = 0,
  BF_SPEC_ORTHO_TRIPLE = 1,
  BF_SPEC_PLANAR_FRAME = 2
} bf_spec_kind;

/* grid extras bitmask */
#define BF_EXTRA_HHAT 1u
#define BF_EXTRA_THETA 2u
#define BF_EXTRA_L_THETA 4u

typedef struct bf_expr bf_expr;
typedef struct bf_field bf_field;           /* vector field */
typedef struct bf_triple bf_triple;         /* coordinate triple (ell, psi, theta) */
typedef struct bf_report bf_report;         /* Beltrami verification report */
typedef struct bf_conditions bf_conditions; /* construction/representation residuals */
typedef struct bf_streamline bf_streamline;
typedef struct bf_grid bf_grid;
typedef struct bf_spec bf_spec;

/* Sampling parameters shared by the verification entry points: `box` is
 * {xmin, xmax, ymin, ymax, zmin, zmax}; points are drawn uniformly and
 * filtered through the field's guard. */

BF_API const char* bf_version(void);

/* Message for the most recent failure on this thread; never NULL. */
BF_API const char* bf_last_error(void);

/* Frees any string returned through a char** out-parameter. */
BF_API void bf_string_free(char* s);

/* -- expressions -------------------------------------------------------- */

BF_API bf_status bf_expr_parse(const char* source, bf_expr** out);
/* Univariate profile in the variable `s`. */
BF_API bf_status bf_expr_parse_profile(const char* source, bf_expr** out);
BF_API bf_status bf_expr_to_string(const bf_expr* e, char** out);
BF_API bf_status bf_expr_eval(const bf_expr* e, double x, double y, double z, double* out);
/* var: 0 = x, 1 = y, 2 = z */
BF_API bf_status bf_expr_diff(const bf_expr* e, int var, bf_expr** out);
BF_API bf_status bf_expr_simplify(const bf_expr* e, bf_expr** out);
BF_API void bf_expr_free(bf_expr* e);

/* -- vector fields ------------------------------------------------------ */

/* guard may be NULL or "none". */
BF_API bf_status bf_field_create(const char* wx, const char* wy, const char* wz,
                                 const char* guard, bf_field** out);
BF_API bf_status bf_field_eval(const bf_field* w, const double p[3], double out[3]);
BF_API bf_status bf_field_component(const bf_field* w, int i, bf_expr** out);
BF_API bf_status bf_field_guard(const bf_field* w, char** out);
BF_API bf_status bf_field_curl(const bf_field* w, bf_field** out);
BF_API bf_status bf_field_divergence_eval(const bf_field* w, const double p[3], double* out);
BF_API bf_status bf_field_fd_curl(const bf_field* w, const double p[3], double h, double out[3]);
BF_API bf_status bf_field_helicity(const bf_field* w, const double p[3], double* out);
BF_API void bf_field_free(bf_field* w);

/* -- coordinate triples and construction -------------------------------- */

BF_API bf_status bf_triple_create(const char* ell, const char* psi, const char* theta,
                                  const char* guard, bf_triple** out);
/* i: 0 = ell, 1 = psi, 2 = theta */
BF_API bf_status bf_triple_coordinate(const bf_triple* t, int i, bf_expr** out);
BF_API bf_status bf_triple_guard(const bf_triple* t, char** out);
BF_API void bf_triple_free(bf_triple* t);

/* Residuals of the five construction conditions; alpha NULL means
 * alpha = |grad theta| (the eikonal residual is then identically zero). */
BF_API bf_status bf_check_construction(const bf_triple* t, const char* alpha,
                                       const double box[6], int n_points, uint64_t seed,
                                       double tol, bf_conditions** out);
/* Residuals of the two (weaker) representation conditions. */
BF_API bf_status bf_check_representation(const bf_triple* t, const double box[6], int n_points,
                                         uint64_t seed, double tol, bf_conditions** out);

BF_API int bf_conditions_count(const bf_conditions* c);
BF_API bf_status bf_conditions_item(const bf_conditions* c, int i, const char** name,
                                    double* max_residual, double worst_point[3], int* pass);
BF_API int bf_conditions_all_pass(const bf_conditions* c);
BF_API bf_status bf_conditions_text(const bf_conditions* c, char** out);
BF_API void bf_conditions_free(bf_conditions* c);

/* w = cos(theta) grad psi + sin(theta) grad ell and the companion
 * w* = sin(theta) grad psi + cos(theta) grad ell, with
 * curl w = sigma |grad theta| w and curl w* = -sigma |grad theta| w*.
 * sigma is the Jacobian sign sampled over n_samples >= 9 guarded points.
 * Outputs may be NULL when not wanted; expected_factor receives the
 * factor sigma |grad theta| as an expression. */
BF_API bf_status bf_build_beltrami(const bf_triple* t, const double box[6], int n_samples,
                                   uint64_t seed, bf_field** w, bf_field** w_star, int* sigma,
                                   bf_expr** expected_factor);

/* Profile variant: antiderivative F (expression in s) rotates by F(theta);
 * the expected factor picks up F'(theta). */
BF_API bf_status bf_build_beltrami_profile(const bf_triple* t, const char* antiderivative,
                                           const double box[6], int n_samples, uint64_t seed,
                                           bf_field** w, bf_field** w_star, int* sigma,
                                           bf_expr** expected_factor);

/* w = (1+f^2)^(-1/2) grad beta + f (1+f^2)^(-1/2) grad alpha with
 * f = f(gamma), for an orthogonal (alpha, beta, gamma) with equal first
 * two scale factors (checked numerically against tol). */
BF_API bf_status bf_build_beltrami_ratio(const char* alpha, const char* beta, const char* gamma,
                                         const char* f, const char* guard, const double box[6],
                                         int n_samples, uint64_t seed, double tol, bf_field** w,
                                         int* sigma, bf_expr** expected_factor);

/* Planar eikonal reduction: ell = e1.x, psi = e2.x, theta = G(n.x) with
 * G' = g along the normal coordinate. G (expression in s) may be NULL, in
 * which case the antiderivative is computed by adaptive quadrature over
 * [s_min, s_max]. g_sign_change reports a zero crossing of g (the
 * eikonal right-hand side must keep one sign). */
BF_API bf_status bf_planar_frame(const double n[3], const char* g, const char* G, double s_min,
                                 double s_max, bf_triple** out, int* g_sign_change);

/* Harmonic conjugate psi of a 2D harmonic ell(x, y), anchored to
 * psi(anchor) = 0. The result is an expression whose value comes from a
 * line integral; its derivatives are exact. */
BF_API bf_status bf_harmonic_conjugate(const char* ell, const double anchor[3], bf_expr** out);
/* Convenience: the triple (ell, conjugate(ell), z). */
BF_API bf_status bf_harmonic_triple(const char* ell, const double anchor[3], bf_triple** out);

/* Built-in charts: "cylindrical", "parabolic_cylindrical", "parabolic". */
BF_API bf_status bf_catalog_chart(const char* name, bf_triple** out);

/* -- verification ------------------------------------------------------- */

/* expected_hhat / expected_div may be NULL. */
BF_API bf_status bf_verify(const bf_field* w, const double box[6], int n_points, uint64_t seed,
                           double tol, const char* expected_hhat, const char* expected_div,
                           bf_report** out);

BF_API double bf_report_alignment_residual(const bf_report* r);
BF_API double bf_report_divergence_max(const bf_report* r);
BF_API bf_class bf_report_classification(const bf_report* r);
BF_API int bf_report_strong(const bf_report* r);
BF_API bf_status bf_report_hhat_stats(const bf_report* r, double* mean, double* variance,
                                      double* min_abs);
/* Residuals against the expected fields; NaN when none was supplied. */
BF_API double bf_report_expected_hhat_residual(const bf_report* r);
BF_API double bf_report_expected_div_residual(const bf_report* r);
BF_API size_t bf_report_point_count(const bf_report* r);
BF_API int bf_report_pass(const bf_report* r);
BF_API bf_status bf_report_text(const bf_report* r, char** out);
BF_API void bf_report_free(bf_report* r);

/* hhat = (w . curl w)/|w|^2 at a point. */
BF_API bf_status bf_proportionality_factor(const bf_field* w, const double p[3], double* out);
BF_API bf_status bf_classify(const bf_field* w, const double box[6], int n_points, uint64_t seed,
                             bf_class* out);

/* max |w . grad theta| and |w . grad L_theta| over the sample. */
BF_API bf_status bf_invariant_check(const bf_field* w, const bf_triple* t, const double box[6],
                                    int n_points, uint64_t seed, double* theta_residual,
                                    double* L_residual);
/* max componentwise |hhat w - grad theta x grad L_theta|. */
BF_API bf_status bf_nambu_check(const bf_field* w, const bf_triple* t, const double box[6],
                                int n_points, uint64_t seed, double* max_residual);
/* Ideal-gas continuity: rho = exp((c - w^2/2)/k); max |div(rho w)|. */
BF_API bf_status bf_continuity_ideal_gas(const bf_field* w, double k, double c,
                                         const double box[6], int n_points, uint64_t seed,
                                         double* max_residual);

/* -- streamlines -------------------------------------------------------- */

/* triple may be NULL (no invariant sampling). rtol/atol/max_step <= 0
 * pick the defaults 1e-10 / 1e-12 / 0.5. */
BF_API bf_status bf_trace(const bf_field* w, const bf_triple* t, const double x0[3],
                          double t_end, double rtol, double atol, double max_step,
                          bf_streamline** out);

BF_API size_t bf_streamline_length(const bf_streamline* s);
/* theta/L receive NaN when no triple was attached. */
BF_API bf_status bf_streamline_sample(const bf_streamline* s, size_t i, double* t, double p[3],
                                      double* theta, double* L_theta);
BF_API bf_status bf_streamline_drift(const bf_streamline* s, double* theta_drift,
                                     double* L_drift);
BF_API int bf_streamline_exited_domain(const bf_streamline* s);
BF_API double bf_streamline_t_final(const bf_streamline* s);
BF_API bf_status bf_streamline_stats(const bf_streamline* s, size_t* accepted, size_t* rejected,
                                     double* max_error_estimate);
BF_API bf_status bf_streamline_write_csv(const bf_streamline* s, const char* path);
BF_API void bf_streamline_free(bf_streamline* s);

/* -- field-spec files --------------------------------------------------- */

BF_API bf_status bf_spec_load(const char* path, bf_spec** out);
BF_API bf_status bf_spec_parse(const char* text, bf_spec** out);
BF_API bf_status bf_spec_save(const bf_spec* s, const char* path);
BF_API bf_status bf_spec_to_string(const bf_spec* s, char** out);
BF_API bf_status bf_spec_name(const bf_spec* s, char** out);
BF_API bf_spec_kind bf_spec_get_kind(const bf_spec* s);
/* NULL out entries are skipped; missing expected entries yield NULL strings. */
BF_API bf_status bf_spec_expected(const bf_spec* s, char** hhat, char** div);
/* vector_field kind only */
BF_API bf_status bf_spec_field(const bf_spec* s, bf_field** out);
/* ortho_triple and planar_frame kinds */
BF_API bf_status bf_spec_triple(const bf_spec* s, bf_triple** out);
BF_API bf_status bf_spec_from_field(const char* name, const bf_field* w, bf_spec** out);
BF_API bf_status bf_spec_from_triple(const char* name, const bf_triple* t, bf_spec** out);
BF_API bf_status bf_spec_from_planar(const char* name, const double n[3], const char* g,
                                     const char* G, bf_spec** out);
BF_API void bf_spec_free(bf_spec* s);

/* -- grid sampling and export ------------------------------------------- */

/* extras is a bitmask of BF_EXTRA_*; theta/L_theta need a triple. */
BF_API bf_status bf_sample_grid(const bf_field* w, const bf_triple* t, const double box[6],
                                int nx, int ny, int nz, unsigned extras, bf_grid** out);
BF_API size_t bf_grid_node_count(const bf_grid* g);
BF_API size_t bf_grid_masked_count(const bf_grid* g);
BF_API bf_status bf_grid_write_vtk(const bf_grid* g, const char* path);
BF_API bf_status bf_grid_write_csv(const bf_grid* g, const char* path);
BF_API void bf_grid_free(bf_grid* g);

/* -- catalog ------------------------------------------------------------ */

BF_API int bf_catalog_count(void);
/* id with index i (0 <= i < bf_catalog_count()); NULL when out of range. */
BF_API const char* bf_catalog_id(int i);
/* Any output may be NULL. triple yields NULL for entries without one
 * (ABC). box receives the entry's sampling box; seeds receives up to
 * 5 * 3 coordinates of the entry's flow seeds (n_seeds their count). */
BF_API bf_status bf_catalog_get(const char* id, bf_field** field, bf_triple** triple,
                                char** expected_hhat, char** expected_div, double box[6],
                                double seeds[15], int* n_seeds, char** description,
                                char** notes);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* BELTRAMI_BELTRAMI_H */

#ifndef BOGO_C_H
#define BOGO_C_H

/*
 * C API of the bogo shared library.
 *
 * All functions return a status code (BOGO_OK on success); outputs come
 * back through pointers.  Objects are opaque handles owned by the library
 * and released with the matching _free call.  bogo_last_error() returns a
 * thread-local message for the most recent failure.
 *
 * Configuration subsets are encoded as bitmasks: bit i selects the i-th
 * site of the table's window (window order equals site order for tables
 * created on the full space).
 */

#include <stdint.h>

#if defined _WIN32
#define BOGO_API __declspec(dllexport)
#else
#define BOGO_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum bogo_status_code {
  BOGO_OK = 0,
  BOGO_EINVAL = 1,    /* invalid argument */
  BOGO_EDOMAIN = 2,   /* precondition on the mathematical domain violated */
  BOGO_EPARSE = 3,    /* malformed JSON / config */
  BOGO_EASSERT = 4,   /* internal cross-check failed */
  BOGO_EREGIME = 5,   /* outside the contraction / uniqueness regime */
  BOGO_ENOCONV = 6,   /* iteration did not converge */
  BOGO_ERUNTIME = 7,  /* I/O or numerical runtime failure */
};

typedef int bogo_status;

typedef struct bogo_space bogo_space;         /* finite weighted site space */
typedef struct bogo_table bogo_table;         /* dense function on subsets */
typedef struct bogo_potential bogo_potential; /* pair potential over a space */

/* table roles */
enum bogo_role {
  BOGO_ROLE_QUASI_OBSERVABLE = 0,
  BOGO_ROLE_OBSERVABLE = 1,
  BOGO_ROLE_MEASURE = 2,
  BOGO_ROLE_CORRELATION = 3,
  BOGO_ROLE_COEFFICIENTS = 4,
};

/* equilibrium equation forms */
enum bogo_eq_form { BOGO_FORM_I = 0, BOGO_FORM_II = 1, BOGO_FORM_III = 2 };

BOGO_API const char* bogo_version(void);
BOGO_API const char* bogo_last_error(void);
BOGO_API void bogo_string_free(char* s);

/* ------------------------------------------------------------- spaces -- */

/* n sites; sigma[n] positive weights; pos may be NULL (line layout) or
 * n*dim coordinates. */
BOGO_API bogo_status bogo_space_create(int n, const double* sigma, const double* pos, int dim,
                                       bogo_space** out);
/* n sites on a line with the given spacing and weight z*spacing each. */
BOGO_API bogo_status bogo_space_grid1d(int n, double spacing, double z, bogo_space** out);
BOGO_API void bogo_space_free(bogo_space* s);
BOGO_API int bogo_space_size(const bogo_space* s);

/* ------------------------------------------------------------- tables -- */

BOGO_API bogo_status bogo_table_create(const bogo_space* space, int role, bogo_table** out);
BOGO_API bogo_status bogo_table_set(bogo_table* t, uint32_t subset, double re, double im);
BOGO_API bogo_status bogo_table_get(const bogo_table* t, uint32_t subset, double* re, double* im);
BOGO_API int bogo_table_window_size(const bogo_table* t);
BOGO_API void bogo_table_free(bogo_table* t);
/* {"window": [...], "entries": [[mask, re, im], ...]}; free with
 * bogo_string_free. */
BOGO_API bogo_status bogo_table_to_json(const bogo_table* t, const bogo_space* space, char** out);
BOGO_API bogo_status bogo_table_from_json(const bogo_space* space, const char* text, int role,
                                          bogo_table** out);

/* ----------------------------------------------------- transforms etc -- */

/* (KG)(gamma) = sum over subsets of gamma. */
BOGO_API bogo_status bogo_k_transform(const bogo_table* g, uint32_t gamma, double* re, double* im);
BOGO_API bogo_status bogo_k_transform_table(const bogo_table* g, bogo_table** out);
BOGO_API bogo_status bogo_k_inverse(const bogo_table* f, bogo_table** out);
BOGO_API bogo_status bogo_lebesgue_poisson_integral(const bogo_table* g, const bogo_space* space,
                                                    uint32_t window, double* re, double* im);
BOGO_API bogo_status bogo_correlation_from_measure(const bogo_table* mu, const bogo_space* space,
                                                   bogo_table** out);
BOGO_API bogo_status bogo_measure_from_correlation(const bogo_table* k, const bogo_space* space,
                                                   bogo_table** out);
/* theta_re/theta_im are per-site arrays of length bogo_space_size. */
BOGO_API bogo_status bogo_bogoliubov_eval(const bogo_table* src, const bogo_space* space,
                                          const double* theta_re, const double* theta_im, double* re,
                                          double* im);
BOGO_API bogo_status bogo_variational_derivatives(const bogo_table* src, const bogo_space* space,
                                                  const double* theta0_re, const double* theta0_im,
                                                  bogo_table** out);
BOGO_API bogo_status bogo_ruelle_check(const bogo_table* k, const bogo_space* space, double a, double eps,
                                       int* pass, uint32_t* witness);

/* --------------------------------------------------------- potentials -- */

/* phi[n*n] row-major, inf_flags[n*n] nonzero marks a hard-core pair (may be
 * NULL). */
BOGO_API bogo_status bogo_potential_matrix(const bogo_space* space, const double* phi,
                                           const unsigned char* inf_flags, double beta,
                                           bogo_potential** out);
/* radial form evaluated on site distances; v_json is the {"form": ...}
 * object. */
BOGO_API bogo_status bogo_potential_radial(const bogo_space* space, const char* v_json, double beta,
                                           bogo_potential** out);
BOGO_API void bogo_potential_free(bogo_potential* p);
BOGO_API bogo_status bogo_energy(const bogo_potential* p, uint32_t eta, double* value, int* is_inf);
BOGO_API bogo_status bogo_interaction(const bogo_potential* p, uint32_t eta, uint32_t gamma, double* value,
                                      int* is_inf);
BOGO_API bogo_status bogo_mayer_norm(const bogo_potential* p, const bogo_space* space, double* out);

/* -------------------------------------------------------- equilibrium -- */

BOGO_API bogo_status bogo_gibbs_measure(const bogo_space* space, const bogo_potential* pot,
                                        bogo_table** out);
/* H(x, gamma) for the GNZ balance; must be thread-free and deterministic. */
typedef double (*bogo_gnz_h_fn)(int site, uint32_t gamma, void* user);
BOGO_API bogo_status bogo_gnz_residual(const bogo_table* mu, const bogo_space* space,
                                       const bogo_potential* pot, bogo_gnz_h_fn h, void* user,
                                       double* out);
/* f_re/f_im may be NULL for form I. */
BOGO_API bogo_status bogo_bogoliubov_equation_residual(const bogo_table* src, const bogo_space* space,
                                                       const bogo_potential* pot, const double* theta_re,
                                                       const double* theta_im, const double* f_re,
                                                       const double* f_im, int form, double* out);

/* ------------------------------------------------------------- solver -- */

/* alpha <= 0 selects 1/C(beta); report_json (optional) receives the
 * contraction report. */
BOGO_API bogo_status bogo_fixed_point_solve(const bogo_space* space, const bogo_potential* pot, double tol,
                                            int max_iter, double alpha, int jobs, bogo_table** out,
                                            char** report_json);
BOGO_API bogo_status bogo_contraction_certificate(const bogo_space* space, const bogo_potential* pot,
                                                  double alpha, int n_pairs, uint64_t seed,
                                                  char** report_json);

/* ------------------------------------------------------ orchestration -- */

/* Runs one experiment config (JSON text).  out_dir may be NULL to honor the
 * config's output_dir; seed < 0 keeps the config seed; jobs <= 0 picks a
 * default.  exit_code receives the CLI-style exit code (0 pass, 1 assertion
 * failure, 2 parse error, 3 runtime abort). */
BOGO_API bogo_status bogo_run_config(const char* config_json, const char* out_dir, int64_t seed, int jobs,
                                     double tolerance_scale, int* exit_code);
/* Same, reading the config from a file. */
BOGO_API bogo_status bogo_run_config_file(const char* path, const char* out_dir, int64_t seed, int jobs,
                                          double tolerance_scale, int* exit_code);
/* Emits plot-ready CSV series from a completed run directory. */
BOGO_API bogo_status bogo_emit_plotdata(const char* run_dir, const char* kind);

#ifdef __cplusplus
}
#endif

#endif /* BOGO_C_H */

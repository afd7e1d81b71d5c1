/* fdiv: sharp bounds between f-divergences.
 *
 * C interface to the core library: construct generators from the registry,
 * evaluate divergences and their curvature-integral representation, solve
 * sharp upper/lower bound problems over small finite supports, run the
 * exact convex decomposition for piecewise-linear objectives, sample joint
 * ranges, and run the self-verification suite.
 *
 * Conventions:
 *   - Every fallible function returns fdiv_status; FDIV_OK is 0.
 *   - On failure, fdiv_last_error() returns a thread-local message that
 *     stays valid until the next failing call on the same thread.
 *   - Unbounded values are IEEE +infinity.
 *   - Strings returned through char** are heap-allocated; release them with
 *     fdiv_string_free.  Arrays returned inside fdiv_bound_result are
 *     released by fdiv_bound_result_free.
 */
#ifndef FDIV_H
#define FDIV_H

#include <stddef.h>

#if defined(_WIN32)
#  define FDIV_API
#elif defined(__GNUC__) || defined(__clang__)
#  define FDIV_API __attribute__((visibility("default")))
#else
#  define FDIV_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fdiv_status {
  FDIV_OK = 0,
  FDIV_ERR_INVALID_ARGUMENT = 1,  /* bad key, bad sizes, bad directions */
  FDIV_ERR_DOMAIN = 2,            /* numeric argument outside its domain */
  FDIV_ERR_UNSUPPORTED_CASE = 3,  /* problem class the theory leaves open */
  FDIV_ERR_UNSUPPORTED_GENERATOR = 4, /* hypothesis certificate failed */
  FDIV_ERR_INTERNAL = 5
} fdiv_status;

/* Thread-local message for the most recent failure on this thread. */
FDIV_API const char* fdiv_last_error(void);

/* Library version, "major.minor.patch". */
FDIV_API const char* fdiv_version(void);

FDIV_API void fdiv_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Generators                                                          */

typedef struct fdiv_generator fdiv_generator;

/* Registry keys: "kl", "tv", "hellinger", "chi2", "triangular",
 * "capacitory" (no parameters); "power" (one parameter l > 1);
 * "primitive" (one parameter s > 0: piecewise-linear generator with kink
 * at s; s = 1 is total variation). */
FDIV_API fdiv_status fdiv_generator_create(const char* key,
                                           const double* params,
                                           size_t n_params,
                                           fdiv_generator** out);

/* Custom generator from a declarative JSON document:
 *   {"name": "...", "base": "<registry key>", "params": [...],
 *    "symmetric": false}
 * Custom generators re-parametrize registry families (tabulated values are
 * rejected: every generator needs closed-form limits).  A declared symmetry
 * is verified by sampling. */
FDIV_API fdiv_status fdiv_generator_create_from_json(const char* json_text,
                                                     fdiv_generator** out);

FDIV_API void fdiv_generator_destroy(fdiv_generator* g);

/* Display name such as "power(3)".  Caller frees with fdiv_string_free. */
FDIV_API fdiv_status fdiv_generator_name(const fdiv_generator* g, char** out);

/* Comma-separated registry keys.  Caller frees with fdiv_string_free. */
FDIV_API fdiv_status fdiv_registry_keys(char** out);

/* Largest attainable divergence value f(0) + f'(inf); +inf when unbounded. */
FDIV_API fdiv_status fdiv_generator_max_value(const fdiv_generator* g,
                                              double* out);
FDIV_API int fdiv_generator_is_symmetric(const fdiv_generator* g);
FDIV_API int fdiv_generator_is_finite(const fdiv_generator* g);

/* ------------------------------------------------------------------ */
/* Divergence evaluation                                               */

/* p and q are probability vectors of length n (entries >= 0, each summing
 * to 1 within 1e-12).  Result may be +inf. */
FDIV_API fdiv_status fdiv_divergence(const fdiv_generator* g, const double* p,
                                     const double* q, size_t n, double* out);

/* min(1, s) - sum_j min(p_j, s q_j): the elementary piecewise-linear
 * divergence with kink at s > 0 (s = 1: total variation distance). */
FDIV_API fdiv_status fdiv_primitive_divergence(const double* p,
                                               const double* q, size_t n,
                                               double s, double* out);

/* CSV table "s,psi" of the curve psi(s) = sum_j min(p_j, q_j s) sampled at
 * its kinks merged with a uniform grid of grid_points samples. */
FDIV_API fdiv_status fdiv_psi_csv(const double* p, const double* q, size_t n,
                                  size_t grid_points, char** out_csv);

/* Divergence through the curvature-integral identity (adaptive quadrature
 * with absolute tolerance abs_tol per smooth piece; pass 0 for 1e-9).
 * Agreement with fdiv_divergence is the library's core cross-check. */
FDIV_API fdiv_status fdiv_integral_representation(const fdiv_generator* g,
                                                  const double* p,
                                                  const double* q, size_t n,
                                                  double abs_tol, double* out);

/* Merge coordinates j and j+1 (0-based).  out_p/out_q have length n-1. */
FDIV_API fdiv_status fdiv_merge_bins(const double* p, const double* q,
                                     size_t n, size_t j, double* out_p,
                                     double* out_q);

/* ------------------------------------------------------------------ */
/* Bound solver                                                        */

typedef struct fdiv_options {
  double grid_step;       /* coarse lattice step; <= 0 selects 0.02 */
  int refine_rounds;      /* box-refinement rounds; < 0 selects 4 */
  double objective_tol;   /* reported accuracy; <= 0 selects 1e-3 */
  double feasibility_tol; /* constraint slack; <= 0 selects 1e-9 */
  int threads;            /* coarse-scan workers; <= 0 selects 1 */
  int disable_constraint_dropping; /* keep droppable constraints (debug) */
  int debug_drop_half_factor;      /* corrupt convex recombination (debug) */
} fdiv_options;

/* Fill with the defaults described above. */
FDIV_API void fdiv_options_init(fdiv_options* o);

typedef struct fdiv_constraint {
  const fdiv_generator* generator;
  double bound;  /* >= 0; +inf marks an inactive at-most constraint */
  int at_least;  /* 0: divergence <= bound; 1: divergence >= bound */
} fdiv_constraint;

/* status values inside fdiv_bound_result */
#define FDIV_SOLVE_OPTIMAL 0
#define FDIV_SOLVE_INFEASIBLE 1
#define FDIV_SOLVE_UNBOUNDED 2

typedef struct fdiv_bound_result {
  double value;   /* +inf possible */
  int status;     /* FDIV_SOLVE_* */
  size_t n_used;  /* support size of the reported pair */
  double* argpair_p; /* length n_used */
  double* argpair_q; /* length n_used */
  /* diagnostics */
  unsigned long long evaluations;
  int refine_rounds_used;
  int polish_sweeps;
  double objective_residual;
  double max_constraint_violation;
  size_t constraints_dropped;
  int fast_path;
  char* note; /* may be NULL */
} fdiv_bound_result;

FDIV_API void fdiv_bound_result_free(fdiv_bound_result* r);

/* Optimize the objective divergence over pairs on n points subject to the
 * m constraints (all at-most when maximizing, all at-least when
 * minimizing).  opts may be NULL for defaults. */
FDIV_API fdiv_status fdiv_solve_finite_dim(const fdiv_generator* objective,
                                           const fdiv_constraint* constraints,
                                           size_t m, int minimize, size_t n,
                                           const fdiv_options* opts,
                                           fdiv_bound_result* out);

/* Sharp supremum under at-most constraints; support size m+2 is exact. */
FDIV_API fdiv_status fdiv_solve_upper(const fdiv_generator* objective,
                                      const fdiv_constraint* constraints,
                                      size_t m, const fdiv_options* opts,
                                      fdiv_bound_result* out);

/* Sharp infimum under at-least constraints, applying the dimension
 * reductions (constraint dropping for bounded objectives, support m+1 for
 * all-piecewise-linear constraint sets, m+2 otherwise).  Returns
 * FDIV_ERR_UNSUPPORTED_CASE when the objective and a kept constraint are
 * both unbounded. */
FDIV_API fdiv_status fdiv_solve_lower(const fdiv_generator* objective,
                                      const fdiv_constraint* constraints,
                                      size_t m, const fdiv_options* opts,
                                      fdiv_bound_result* out);

/* ------------------------------------------------------------------ */
/* Convex decomposition for piecewise-linear objectives                */

/* Number of nondecreasing sign vectors of length m+2 (always m+3). */
FDIV_API fdiv_status fdiv_sign_pattern_count(size_t m, size_t* out);

/* Entries of the k-th pattern (0-based, ordered by trailing +1 count),
 * written to sigma_out (length m+2, values -1/+1). */
FDIV_API fdiv_status fdiv_sign_pattern(size_t m, size_t k, int* sigma_out);

/* Maximize sum_j sigma_j (p_j - s q_j) under the at-most constraints.
 * sigma has length len (nondecreasing, entries -1/+1). */
FDIV_API fdiv_status fdiv_solve_conopt(const int* sigma, size_t len, double s,
                                       const fdiv_constraint* constraints,
                                       size_t m, const fdiv_options* opts,
                                       double* out);

/* Sharp supremum of the piecewise-linear divergence with kink at s via the
 * exact convex decomposition (-|s-1|/2 + max over patterns / 2). */
FDIV_API fdiv_status fdiv_solve_primitive_convex(
    double s, const fdiv_constraint* constraints, size_t m,
    const fdiv_options* opts, fdiv_bound_result* out);

/* Improvement of the joint (Hellinger <= H, KL <= K) bound on total
 * variation over the pointwise minimum of the single-constraint bounds.
 * out5 receives {improvement, raw, single_h, single_k, joint}. */
FDIV_API fdiv_status fdiv_improvement_over_pointwise_min(
    double H, double K, const fdiv_options* opts, double* out5);

/* ------------------------------------------------------------------ */
/* Closed forms                                                        */

/* Smallest D_g given total variation >= V (variational form; any g). */
FDIV_API fdiv_status fdiv_closed_form_b_tv(const fdiv_generator* g, double V,
                                           double* out);

/* Same bound via the symmetric-generator formula (1-V) f((1+V)/(1-V)). */
FDIV_API fdiv_status fdiv_closed_form_b_tv_symmetric(const fdiv_generator* g,
                                                     double V, double* out);

/* Smallest D_g given the kink-at-s divergence >= D. */
FDIV_API fdiv_status fdiv_closed_form_b_kink(const fdiv_generator* g,
                                             double s, double D, double* out);

/* Largest D_g given total variation <= V:  V * (f(0) + f'(inf)). */
FDIV_API fdiv_status fdiv_closed_form_a_tv(const fdiv_generator* g, double V,
                                           double* out);

/* Largest chi-squared divergence given D_{f1} <= D, by inverting
 * h(x) = (1 + f1(x))/x (requires the monotonicity/convexity certificate). */
FDIV_API fdiv_status fdiv_closed_form_a_chi2(const fdiv_generator* f1,
                                             double D, double* out);

/* Power-family specialization (1+D)^{1/(l-1)} - 1, l > 2. */
FDIV_API fdiv_status fdiv_closed_form_a_power_chi2(double l, double D,
                                                   double* out);

/* Quadratic reference lower bound 2 V^2 (not sharp). */
FDIV_API fdiv_status fdiv_pinsker_reference(double V, double* out);

/* Linear reference envelope for capacitory vs triangular:
 * (delta/2, log(2) * delta). */
FDIV_API fdiv_status fdiv_topsoe_bounds(double delta, double* lower,
                                        double* upper);

/* ------------------------------------------------------------------ */
/* Joint range                                                         */

/* Sample `count` pairs on n points with the seeded deterministic sampler
 * (plus the two corner pairs) and return the cloud as CSV: header
 * d1..dm,p1..pn,q1..qn, one row per point, "inf" for unbounded values. */
FDIV_API fdiv_status fdiv_sample_joint_range_csv(
    const fdiv_generator* const* generators, size_t m, size_t n, size_t count,
    unsigned long long seed, char** out_csv);

/* Sample a two-generator cloud and check every point against the sharp
 * upper/lower envelopes of coordinate objective_index given the other
 * coordinate (20 abscissae, linear interpolation, tolerance
 * 10 * objective_tol).  out_report receives a human-readable summary. */
FDIV_API fdiv_status fdiv_envelope_check(
    const fdiv_generator* const* generators, size_t n, size_t count,
    unsigned long long seed, size_t objective_index, const fdiv_options* opts,
    size_t* out_violations, size_t* out_checked, char** out_report);

/* ------------------------------------------------------------------ */
/* Verification                                                        */

/* Run the oracle-agreement suite.  out_report receives one line per check
 * ("PASS name ..." / "FAIL name ...").  all_passed receives 1/0.
 * corrupt_half_factor != 0 deliberately breaks the convex recombination so
 * the corresponding check must fail (harness negative control). */
FDIV_API fdiv_status fdiv_run_verification(const fdiv_options* opts,
                                           int corrupt_half_factor,
                                           char** out_report, int* all_passed);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FDIV_H */

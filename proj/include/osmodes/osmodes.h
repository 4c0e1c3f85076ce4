#ifndef OSMODES_H
#define OSMODES_H

#include <stddef.h>

#if defined(OSMODES_BUILDING)
#define OSM_API __attribute__((visibility("default")))
#else
#define OSM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum osm_status {
  OSM_OK = 0,
  OSM_INVALID_ARGUMENT,
  OSM_NO_CONVERGENCE,
  OSM_DERIVATIVE_VANISHES,
  OSM_OVERFLOW,
  OSM_UNSUPPORTED_ORDER,
  OSM_NEAR_ZERO_DENOMINATOR,
  OSM_BRANCH_AMBIGUITY,
  OSM_QUADRATURE_FAILURE,
  OSM_SERIES_DIVERGING,
  OSM_BRANCH_FAILURE,
  OSM_HYPOTHESIS_VIOLATED,
  OSM_CONTRACTION_NOT_CERTIFIED,
  OSM_DEGENERATE_DENOMINATOR,
  OSM_MODE_CONSTRUCTION_FAILED,
  OSM_LEFT_HALF_PLANE_EXIT,
  OSM_ILL_CONDITIONED,
  OSM_EIGEN_SOLVE_FAILED,
  OSM_CROSSING_NOT_FOUND,
  OSM_INTERNAL_ERROR = 100
} osm_status;

typedef struct osm_complex {
  double re, im;
} osm_complex;

typedef struct osm_profile osm_profile;
typedef struct osm_context osm_context;
typedef struct osm_modes osm_modes;
typedef struct osm_branch_scan osm_branch_scan;

typedef enum osm_solver { OSM_SOLVER_NEUMANN = 0, OSM_SOLVER_GMRES = 1, OSM_SOLVER_AUTO = 2 } osm_solver;

typedef struct osm_numerics {
  double series_tol;
  double iter_tol;
  int max_iter;
  osm_solver solver;
  double max_alpha;
  double mesh_refine;      /* panel length multiplier, smaller is finer */
  int reduced;             /* nonzero: root-find the reduced relation */
  double tol_dc;
  double tol_residual;
  int max_secant;
} osm_numerics;

/* Name and message of the most recent failure on the calling thread. */
OSM_API const char* osm_status_name(osm_status s);
OSM_API const char* osm_last_error(void);
OSM_API void osm_numerics_default(osm_numerics* out);

/* Profiles: "poiseuille", "sin", "couette" or "poly: [a0, a1, ...]". */
OSM_API osm_status osm_profile_create(const char* spec, osm_profile** out);
OSM_API void osm_profile_destroy(osm_profile* p);
OSM_API const char* osm_profile_name(const osm_profile* p);
/* U, U', U'', U''', U'''' at z. */
OSM_API osm_status osm_profile_eval(const osm_profile* p, osm_complex z, osm_complex out[5]);
OSM_API osm_status osm_critical_point(const osm_profile* p, osm_complex c, osm_complex guess,
                                      osm_complex* z_c, double* residual);

/* kind 0 = Ai, 1 = Ci; order in [-2, 2], negative for derivatives. */
OSM_API osm_status osm_airy_eval(int kind, int order, osm_complex z, osm_complex* out);
OSM_API osm_status osm_airy_log_eval(int kind, int order, osm_complex z, double* log_modulus,
                                     osm_complex* phase);
OSM_API osm_status osm_c_ai_ratio(osm_complex y, osm_complex* out);

/* All layers for one (profile, alpha, R, c). */
OSM_API osm_status osm_context_create(const osm_profile* p, double alpha, double R, osm_complex c,
                                      const osm_numerics* opt, osm_context** out);
OSM_API void osm_context_destroy(osm_context* ctx);
OSM_API size_t osm_context_size(const osm_context* ctx);
OSM_API osm_complex osm_context_node(const osm_context* ctx, size_t i);
OSM_API osm_complex osm_context_critical_point(const osm_context* ctx);
OSM_API osm_complex osm_context_delta(const osm_context* ctx);
/* Airy Green function G(x_i, z_j) with the node j nearest to z0, x over all nodes.
   part 0 localized, 1 non-localized, 2 full; k is the z-derivative order 0..3. */
OSM_API osm_status osm_context_green_slice(const osm_context* ctx, osm_complex z0, int part, int k,
                                           osm_complex* out, size_t n);
/* Largest ||Iter f|| / ||f|| over the fixed probe family. */
OSM_API osm_status osm_context_contraction(const osm_context* ctx, double* kappa);

OSM_API osm_status osm_modes_build(const osm_context* ctx, osm_modes** out);
OSM_API void osm_modes_destroy(osm_modes* m);
/* K1..K4. */
OSM_API void osm_modes_ratios(const osm_modes* m, osm_complex K[4]);
OSM_API size_t osm_modes_size(const osm_modes* m);
/* Mantissa of d^k phi_j at node i (j = 1..4, k = 0..3); the value is mantissa * exp(log_scale). */
OSM_API osm_status osm_modes_value(const osm_modes* m, int j, int k, size_t i, osm_complex* out);
OSM_API double osm_modes_log_scale(const osm_modes* m, int j);
/* Sup of the Orr residual of phi_j relative to sup |phi_j|. */
OSM_API osm_status osm_modes_residual(const osm_modes* m, int j, double* relative);
/* phi_j and phi_j' (mantissas) at a point of [0,1] by Taylor-stepping from the mesh. */
OSM_API osm_status osm_modes_at(const osm_modes* m, int j, double z, osm_complex out[2]);
OSM_API osm_status osm_modes_determinant(const osm_modes* m, osm_complex* det, double* relative);

typedef struct osm_eigen_result {
  double alpha, R;
  osm_complex c;
  double growth_rate;
  double residual;
  int iterations;
} osm_eigen_result;

/* seed may be NULL for the default seed. */
OSM_API osm_status osm_solve_eigenvalue(const osm_profile* p, double alpha, double R, const osm_complex* seed,
                                        const osm_numerics* opt, osm_eigen_result* out);

typedef struct osm_branch_point {
  double A, alpha;
  int converged;
  osm_complex c;
  double residual;
} osm_branch_point;

/* alpha = A R^-beta swept over A in order with continuation; sign changes of Im c bisected. */
OSM_API osm_status osm_scan_branch(const osm_profile* p, double R, double beta, const double* A, size_t nA,
                                   double rel_tol, const osm_numerics* opt, osm_branch_scan** out);
OSM_API void osm_branch_scan_destroy(osm_branch_scan* s);
OSM_API size_t osm_branch_scan_points(const osm_branch_scan* s);
OSM_API osm_branch_point osm_branch_scan_point(const osm_branch_scan* s, size_t i);
OSM_API size_t osm_branch_scan_crossings(const osm_branch_scan* s);
OSM_API double osm_branch_scan_crossing(const osm_branch_scan* s, size_t i, osm_complex* c);
OSM_API const char* osm_branch_scan_status(const osm_branch_scan* s);

typedef struct osm_growth_row {
  double beta, R, alpha;
  int converged;
  osm_complex c;
  double growth_rate;
} osm_growth_row;

/* rows has room for nb * nR entries, ordered by beta then R. */
OSM_API osm_status osm_growth_rates(const osm_profile* p, const double* betas, size_t nb, const double* Rs,
                                    size_t nR, double A, int workers, const osm_numerics* opt,
                                    osm_growth_row* rows);
OSM_API osm_status osm_fit_slope(const double* x, const double* y, size_t n, double* slope);

/* Runs fn(i, user) for i in [0, n) on up to `workers` threads. */
OSM_API void osm_parallel_for(size_t n, int workers, void (*fn)(size_t, void*), void* user);

typedef struct osm_collocation_result {
  int found;
  osm_complex c;
  double pair_distance;
  int self_converged;
} osm_collocation_result;

/* Leading confirmed eigenvalue at N and N + dN; with unstable_only, found = 0 when all Im c < 0. */
OSM_API osm_status osm_collocation_leading(const osm_profile* p, double alpha, double R, int N, int dN,
                                           int unstable_only, osm_collocation_result* out);
OSM_API osm_status osm_collocation_nearest(const osm_profile* p, double alpha, double R, osm_complex target,
                                           int N, int dN, osm_collocation_result* out);

#ifdef __cplusplus
}
#endif

#endif

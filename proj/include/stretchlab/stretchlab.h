#ifndef STRETCHLAB_H
#define STRETCHLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef STRETCHLAB_BUILDING
#    define STRETCHLAB_API __declspec(dllexport)
#  else
#    define STRETCHLAB_API __declspec(dllimport)
#  endif
#else
#  define STRETCHLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sl_status {
    SL_OK = 0,
    SL_ERR_INVALID_ARGUMENT = 1,
    SL_ERR_NUMERICAL = 2,
    SL_ERR_NO_BRACKET = 3,
    SL_ERR_LINE_SEARCH = 4,
    SL_ERR_IO = 5,
    SL_ERR_INTERNAL = 6
} sl_status;

typedef enum sl_boundary { SL_NEUMANN = 0, SL_DIRICHLET = 1 } sl_boundary;

typedef enum sl_termination { SL_CONVERGED = 0, SL_MAX_ITERS = 1, SL_LINE_SEARCH_FAILED = 2 } sl_termination;

typedef struct sl_cylinder sl_cylinder;
typedef struct sl_gridmap sl_gridmap;
typedef struct sl_profile sl_profile;

/* Message of the last failing call on this thread; empty after success. */
STRETCHLAB_API const char* sl_last_error(void);
STRETCHLAB_API const char* sl_version(void);
STRETCHLAB_API const char* sl_status_name(sl_status s);
/* Frees strings returned through char** out-parameters. */
STRETCHLAB_API void sl_string_free(char* s);
STRETCHLAB_API sl_status sl_set_threads(int n);
STRETCHLAB_API int sl_get_threads(void);

/* Geometry */
STRETCHLAB_API sl_status sl_cylinder_create(double h, double d, double L, int Ns, int Nt, sl_cylinder** out);
STRETCHLAB_API void sl_cylinder_destroy(sl_cylinder* c);
STRETCHLAB_API sl_status sl_cylinder_exact_area(const sl_cylinder* c, double* out);

/* Grid maps: (Ns + 1) x Nt nodes on the hyperboloid */
STRETCHLAB_API sl_status sl_gridmap_exact_neumann(const sl_cylinder* c, sl_gridmap** out);
STRETCHLAB_API sl_status sl_gridmap_perturbed_neumann(const sl_cylinder* c, double amplitude, uint64_t seed,
                                                      sl_gridmap** out);
STRETCHLAB_API sl_status sl_gridmap_dirichlet_initial(const sl_cylinder* c, double R0, sl_gridmap** out);
STRETCHLAB_API sl_status sl_gridmap_clone(const sl_gridmap* u, sl_gridmap** out);
STRETCHLAB_API void sl_gridmap_destroy(sl_gridmap* u);
STRETCHLAB_API sl_status sl_gridmap_node(const sl_gridmap* u, int i, int j, double xyz[3]);
STRETCHLAB_API sl_status sl_gridmap_set_node(sl_gridmap* u, int i, int j, const double xyz[3]);
STRETCHLAB_API sl_status sl_gridmap_sup_R(const sl_gridmap* u, double* out);
STRETCHLAB_API sl_status sl_gridmap_write_csv(const sl_gridmap* u, const sl_cylinder* c, const char* path,
                                              const char* header);

/* Energy */
STRETCHLAB_API sl_status sl_jp(const sl_gridmap* u, const sl_cylinder* c, double p, double* out);
STRETCHLAB_API sl_status sl_el_residual(const sl_gridmap* u, const sl_cylinder* c, double p, sl_boundary bc,
                                        double* out);
/* Gradient in node order (i major), three doubles per node; buffer of 3 (Ns + 1) Nt doubles. */
STRETCHLAB_API sl_status sl_jp_gradient(const sl_gridmap* u, const sl_cylinder* c, double p, double* grad,
                                        size_t len);

typedef struct sl_solver_options {
    double p;
    sl_boundary bc;
    int max_iters;
    double grad_tol;
    double initial_step;
    double backtrack;
    double armijo;
    int bb_steps;
    int gauge_fix;
    uint64_t seed;
} sl_solver_options;

typedef struct sl_solve_summary {
    double Jp;
    double el_residual;
    int iters;
    int converged;
    sl_termination termination;
} sl_solve_summary;

STRETCHLAB_API void sl_solver_options_default(sl_solver_options* opts);
/* On non-convergence the partial result is still returned through out and summary. */
STRETCHLAB_API sl_status sl_solve(const sl_cylinder* c, const sl_gridmap* init, const sl_solver_options* opts,
                                  sl_gridmap** out, sl_solve_summary* summary);
/* Normalization, concentration, mass and Noether diagnostics of a map, as JSON. */
STRETCHLAB_API sl_status sl_diagnose_json(const sl_gridmap* u, const sl_cylinder* c, double p, sl_boundary bc,
                                          const double* eps, size_t n_eps, char** json_out);

typedef struct sl_sweep_options {
    sl_solver_options solver;
    const double* eps;
    size_t n_eps;
    double init_amplitude;
    double dirichlet_R0;
    uint64_t seed;
    double fail_at_p;
} sl_sweep_options;

STRETCHLAB_API void sl_sweep_options_default(sl_sweep_options* opts);
/* JSON array of sweep records. Density CSVs go to density_dir when it is non-null.
   Returns SL_ERR_NUMERICAL when any record failed; the JSON is produced regardless. */
STRETCHLAB_API sl_status sl_sweep_json(const sl_cylinder* c, const double* p_list, size_t n_p,
                                       const sl_sweep_options* opts, const char* density_dir, const char* header,
                                       char** json_out);

/* Property and inequality suites: {"svnorm": {...}, "pointwise": {...}, "all_pass": bool} */
STRETCHLAB_API sl_status sl_svcheck_json(int trials, const double* p_list, size_t n_p, uint64_t seed,
                                         char** json_out);

/* Radial profiles */
STRETCHLAB_API sl_status sl_profile_ivp(double p, double L, double slope0, double h, sl_profile** out);
STRETCHLAB_API sl_status sl_profile_shoot(double p, double L, double h, double R0, sl_profile** out);
STRETCHLAB_API sl_status sl_profile_limit(double s_star, double L, double h, sl_profile** out);
STRETCHLAB_API sl_status sl_limit_s_star(double L, double h, double R0, double* out);
STRETCHLAB_API void sl_profile_destroy(sl_profile* prof);
STRETCHLAB_API size_t sl_profile_size(const sl_profile* prof);
STRETCHLAB_API sl_status sl_profile_sample(const sl_profile* prof, size_t k, double* s, double* R, double* Rp,
                                           int* region);
STRETCHLAB_API sl_status sl_profile_eval(const sl_profile* prof, double x, double* R);
STRETCHLAB_API sl_status sl_profile_energy(const sl_profile* prof, double p, double L, double h, double* out);
/* Summary plus monotonicity checks over the given number of random pairs. */
STRETCHLAB_API sl_status sl_profile_json(const sl_profile* prof, int pairs, uint64_t seed, char** json_out);
STRETCHLAB_API sl_status sl_profile_write_csv(const sl_profile* prof, const char* path, const char* header);

/* Ideal optimal map profile; K_star < 0 means K_star = K0. csv_path may be null. */
STRETCHLAB_API sl_status sl_ideal_map_json(double h, double h0, double L, double K0, double K_star, int samples,
                                           const char* csv_path, const char* header, char** json_out);

#ifdef __cplusplus
}
#endif

#endif

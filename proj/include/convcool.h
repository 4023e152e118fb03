/* convcool: optimal convection-cooling solver, public C interface.
 *
 * The library computes stationary velocity fields that minimize the
 * temperature variance of a heated unit square plus a gradient penalty,
 * discretized with Taylor-Hood finite elements and solved by combined
 * Picard/Newton iterations. All functions return cc_status; details of
 * the most recent error on the calling thread are available through
 * cc_last_error(). Handles are opaque and must be released with the
 * matching _destroy function.
 */
#ifndef CONVCOOL_H
#define CONVCOOL_H

#include <stddef.h>

#if defined(_WIN32)
#define CC_API __declspec(dllexport)
#else
#define CC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cc_status {
  CC_OK = 0,
  CC_ERR_INVALID_ARGUMENT = 1,
  CC_ERR_PARSE = 2,
  CC_ERR_SOLVER_FAILURE = 3,
  CC_ERR_IO = 4
} cc_status;

CC_API const char* cc_status_name(cc_status status);
/* Message of the last failure on this thread; empty string if none. */
CC_API const char* cc_last_error(void);
CC_API const char* cc_version(void);

/* ------------------------------------------------------------------ */
/* Heat sources                                                        */

typedef struct cc_source cc_source;

/* Built-in benchmark sources, id in 1..4. */
CC_API cc_status cc_source_create_example(int id, cc_source** out);
/* Arithmetic expression in x and y: operators + - * / ^, functions
 * sin cos exp, constant pi. */
CC_API cc_status cc_source_create_expression(const char* expression, cc_source** out);
CC_API double cc_source_eval(const cc_source* source, double x, double y);
CC_API void cc_source_destroy(cc_source* source);

/* ------------------------------------------------------------------ */
/* Problems (mesh + operators for one kappa)                           */

typedef struct cc_problem cc_problem;

/* subdivisions >= 2 cells per side; skew_convection != 0 selects the
 * antisymmetrized convection form. The same problem may be solved
 * concurrently from several threads. */
CC_API cc_status cc_problem_create(int subdivisions, double kappa, int skew_convection,
                                   const cc_source* source, cc_problem** out);
CC_API void cc_problem_destroy(cc_problem* problem);

CC_API size_t cc_problem_vertex_count(const cc_problem* problem);
CC_API size_t cc_problem_triangle_count(const cc_problem* problem);
/* xy: 2 * vertex_count doubles, x then y per vertex. */
CC_API cc_status cc_problem_vertices(const cc_problem* problem, double* xy);
/* indices: 3 * triangle_count ints, counterclockwise. */
CC_API cc_status cc_problem_triangles(const cc_problem* problem, int* indices);

/* ------------------------------------------------------------------ */
/* Solver runs                                                         */

typedef struct cc_run cc_run;

typedef struct cc_solve_options {
  double gamma;     /* control weight, > 0 */
  double eps1;      /* Picard relative-cost tolerance */
  double eps2;      /* Newton relative-cost tolerance */
  int max_picard;   /* Picard iteration cap */
  int max_newton;   /* Newton iteration cap (0 = Picard only) */
} cc_solve_options;

CC_API void cc_solve_options_defaults(cc_solve_options* options);

/* Runs the combined Picard/Newton iteration. Returns CC_OK also when the
 * iteration caps were reached without convergence (query
 * cc_run_converged); CC_ERR_SOLVER_FAILURE means a linear solve failed. */
CC_API cc_status cc_problem_solve(const cc_problem* problem, const cc_solve_options* options,
                                  cc_run** out);
CC_API void cc_run_destroy(cc_run* run);

typedef struct cc_iteration {
  int phase;                 /* 0 = Picard, 1 = Newton */
  int index;                 /* iteration number within the phase */
  double cost;               /* J */
  double variance_term;      /* |T - <T>|^2 / 2 */
  double control_term;       /* gamma |grad v|^2 / 2 */
  double relative_change;    /* NaN on the initial record */
  double nonlinear_residual; /* coupled weak residual norm */
} cc_iteration;

CC_API int cc_run_converged(const cc_run* run);
CC_API size_t cc_run_iteration_count(const cc_run* run);
CC_API cc_status cc_run_iteration(const cc_run* run, size_t index, cc_iteration* out);

CC_API double cc_run_cost(const cc_run* run);
CC_API double cc_run_variance_norm(const cc_run* run);   /* |T - <T>| */
CC_API double cc_run_control_energy(const cc_run* run);  /* gamma |grad v|^2 */
CC_API double cc_run_max_vertex_temperature(const cc_run* run);
CC_API double cc_run_min_vertex_temperature(const cc_run* run);
CC_API double cc_run_max_vertex_speed(const cc_run* run);
CC_API double cc_run_divergence_norm(const cc_run* run);
CC_API double cc_run_gamma(const cc_run* run);
CC_API double cc_run_kappa(const cc_run* run);

/* Vertex-sampled fields; each output array holds vertex_count values
 * (velocity: 2 per vertex, interleaved). Pass NULL to skip a field. */
CC_API cc_status cc_run_vertex_fields(const cc_run* run, double* temperature, double* adjoint,
                                      double* pressure, double* velocity_xy);

/* Rescale a kappa = 1 solution to another diffusivity; the control weight
 * becomes gamma / kappa^4 and the cost history scales by kappa^-2. */
CC_API cc_status cc_run_scale(const cc_run* run, double kappa, cc_run** out);

/* ------------------------------------------------------------------ */
/* Exporters                                                           */

CC_API cc_status cc_run_export_vtk(const cc_run* run, const char* path);
CC_API cc_status cc_run_export_iterations_csv(const cc_run* run, const char* path);

/* gamma strictly increasing; r_* outputs hold rows-1 defined entries.
 * Any r_* pointer may be NULL. */
CC_API cc_status cc_compute_rates(size_t rows, const double* gamma, const double* cost,
                                  const double* variance_norm, const double* control_energy,
                                  double* r_cost, double* r_variance, double* r_control);

CC_API cc_status cc_export_sweep_csv(const char* path, size_t rows, const double* gamma,
                                     const double* cost, const double* variance_norm,
                                     const double* control_energy);

#ifdef __cplusplus
}
#endif

#endif /* CONVCOOL_H */

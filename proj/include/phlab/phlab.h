#ifndef PHLAB_PHLAB_H
#define PHLAB_PHLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define PHLAB_API __declspec(dllexport)
#else
#  define PHLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Every fallible call returns a status; on failure the message (and, for
   validation errors, the offending config field) is kept per thread until
   the next failing call. Output parameters are untouched on failure.
   Matrices are 3x3 row-major, point arrays are packed x,y,z triples. */
typedef enum phlab_status {
  PHLAB_OK = 0,
  PHLAB_E_INVALID_ARGUMENT = 1,
  PHLAB_E_DOMAIN = 2,
  PHLAB_E_SIZE_CAP = 3,
  PHLAB_E_NUMERICAL = 4,
  PHLAB_E_IO = 5,
  PHLAB_E_VALIDATION = 6,
  PHLAB_E_SAMPLING = 7,
  PHLAB_E_BUFFER_TOO_SMALL = 8,
  PHLAB_E_INTERNAL = 99
} phlab_status;

PHLAB_API const char* phlab_version(void);
PHLAB_API const char* phlab_last_error(void);
/* Config field named by the last validation error, "" otherwise. */
PHLAB_API const char* phlab_last_error_field(void);
PHLAB_API const char* phlab_status_name(phlab_status status);

/* ---- densities ---------------------------------------------------------- */

typedef struct phlab_density phlab_density;

PHLAB_API phlab_status phlab_density_uniform_box(const double lo[3], const double hi[3], phlab_density** out);
PHLAB_API phlab_status phlab_density_uniform_ball(const double center[3], double radius, phlab_density** out);
/* weights: dims[0]*dims[1]*dims[2] nonnegative cell weights, x fastest. */
PHLAB_API phlab_status phlab_density_piecewise_grid(const double lo[3], const double hi[3], const int dims[3],
                                                    const double* weights, size_t count, phlab_density** out);
PHLAB_API void phlab_density_free(phlab_density* density);
PHLAB_API phlab_status phlab_density_sup_norm(const phlab_density* density, double* out);
PHLAB_API phlab_status phlab_density_value(const phlab_density* density, const double x[3], double* out);
PHLAB_API phlab_status phlab_density_mass_in_box(const phlab_density* density, const double lo[3],
                                                 const double hi[3], double* out);

/* ---- configurations ----------------------------------------------------- */

typedef struct phlab_configuration phlab_configuration;

PHLAB_API phlab_status phlab_configuration_sample(const phlab_density* density, size_t n, uint64_t seed,
                                                  double alpha, phlab_configuration** out);
PHLAB_API phlab_status phlab_configuration_from_points(const double* xyz, size_t n, double alpha,
                                                       phlab_configuration** out);
PHLAB_API phlab_status phlab_configuration_load(const char* path, phlab_configuration** out);
PHLAB_API phlab_status phlab_configuration_save(const phlab_configuration* config, const char* path);
PHLAB_API void phlab_configuration_free(phlab_configuration* config);
PHLAB_API size_t phlab_configuration_size(const phlab_configuration* config);
PHLAB_API double phlab_configuration_eps(const phlab_configuration* config);
/* xyz must hold 3 * size doubles. */
PHLAB_API phlab_status phlab_configuration_centers(const phlab_configuration* config, double* xyz);
/* out must hold size doubles. */
PHLAB_API phlab_status phlab_configuration_nn_distances(const phlab_configuration* config, double* out);
/* eta_i = min(m_eta eps^beta, d_i); out must hold size doubles. */
PHLAB_API phlab_status phlab_truncation_scales(const phlab_configuration* config, double beta, double m_eta,
                                               double* out);

/* ---- events ------------------------------------------------------------- */

typedef enum phlab_event { PHLAB_EVENT_A = 0, PHLAB_EVENT_B = 1 } phlab_event;

typedef struct phlab_event_estimate {
  size_t trials;
  size_t successes;
  double p_hat;
  double ci_low; /* Wilson 95% */
  double ci_high;
} phlab_event_estimate;

PHLAB_API phlab_status phlab_indicator_A(const phlab_configuration* config, double L, double alpha_thresh, int* out);
PHLAB_API phlab_status phlab_indicator_B(const phlab_configuration* config, double lambda, double rho_sup, int* out);
PHLAB_API phlab_status phlab_smeared_density_sup(const phlab_configuration* config, double lambda, double* out);
/* Event A uses threshold 2 L eps^alpha with param = L; event B uses
   param = lambda and the density's sup norm. */
PHLAB_API phlab_status phlab_estimate_event(const phlab_density* density, phlab_event event, size_t n, size_t trials,
                                            uint64_t seed, double alpha, double param, unsigned threads,
                                            phlab_event_estimate* out);

typedef enum phlab_eta_mode { PHLAB_ETA_MONTE_CARLO = 0, PHLAB_ETA_LAYER_CAKE = 1 } phlab_eta_mode;

typedef struct phlab_eta_moment {
  double value;
  double std_error;
  size_t trials;
  int exact_distribution;
} phlab_eta_moment;

PHLAB_API phlab_status phlab_eta_moment_estimate(const phlab_density* density, size_t n, double beta, double m_eta,
                                                 double kappa, size_t trials, phlab_eta_mode mode, uint64_t seed,
                                                 unsigned threads, phlab_eta_moment* out);

/* ---- transport ---------------------------------------------------------- */

/* W2 between sum a_i delta_{x_i} and sum b_j delta_{y_j}; a or b may be NULL
   for uniform weights. */
PHLAB_API phlab_status phlab_w2(const double* x, const double* a, size_t n, const double* y, const double* b,
                                size_t m, double* out);
PHLAB_API phlab_status phlab_w2_plan_cost_smeared(const phlab_configuration* config, double lambda,
                                                  double* plan_cost, double* bound);
PHLAB_API phlab_status phlab_w2_empirical_vs_density(const phlab_density* density,
                                                     const phlab_configuration* config, size_t ref_samples,
                                                     uint64_t seed, double* out);

typedef struct phlab_rate_fit {
  double slope;
  double intercept;
  double slope_se;
  double slope_ci_low; /* 95%, Student t */
  double slope_ci_high;
  double r_squared;
  size_t points;
} phlab_rate_fit;

PHLAB_API phlab_status phlab_fit_power_law(const double* x, const double* y, size_t n, phlab_rate_fit* out);

/* ---- fields ------------------------------------------------------------- */

typedef struct phlab_box {
  double center[3];
  double side;
  int n; /* power of two >= 32 */
} phlab_box;

typedef struct phlab_grid phlab_grid;

/* Atoms with weights w (NULL for uniform). */
PHLAB_API phlab_status phlab_grid_from_points(const double* xyz, const double* w, size_t n, const phlab_box* box,
                                              phlab_grid** out);
PHLAB_API phlab_status phlab_grid_from_smeared(const phlab_configuration* config, double lambda,
                                               const phlab_box* box, phlab_grid** out);
PHLAB_API phlab_status phlab_grid_from_density(const phlab_density* density, const phlab_box* box,
                                               phlab_grid** out);
PHLAB_API phlab_status phlab_grid_from_sphere_shell(const double center[3], double radius, const phlab_box* box,
                                                    phlab_grid** out);
/* a -= b; boxes must match. */
PHLAB_API phlab_status phlab_grid_subtract(phlab_grid* a, const phlab_grid* b);
PHLAB_API phlab_status phlab_grid_hneg1_norm(const phlab_grid* grid, int drop_zero_mode, double* out);
PHLAB_API phlab_status phlab_grid_integral(const phlab_grid* grid, double* out);
/* Borrowed pointer to n^3 cell values, valid until the grid is freed. */
PHLAB_API phlab_status phlab_grid_values(const phlab_grid* grid, const double** values, size_t* count);
PHLAB_API phlab_status phlab_grid_export(const phlab_grid* grid, const char* path);
PHLAB_API phlab_status phlab_grid_import(const char* path, phlab_grid** out);
PHLAB_API void phlab_grid_free(phlab_grid* grid);

/* ---- stokes ------------------------------------------------------------- */

typedef struct phlab_stokes_value {
  double velocity[3];
  double pressure;
  double gradient[9];
  double stress[9];
} phlab_stokes_value;

PHLAB_API phlab_status phlab_sphere_stokes_eval(double a, int k, const double y[3], phlab_stokes_value* out);

typedef struct phlab_corrector phlab_corrector;

typedef enum phlab_corrector_quantity {
  PHLAB_CORRECTOR_W_MINUS_ID = 0,
  PHLAB_CORRECTOR_GRADIENT = 1,
  PHLAB_CORRECTOR_PRESSURE = 2
} phlab_corrector_quantity;

PHLAB_API phlab_status phlab_corrector_create(const phlab_configuration* config, double beta, double m_eta,
                                              double particle_radius, phlab_corrector** out);
PHLAB_API phlab_status phlab_corrector_create_explicit(const double* centers, size_t n, double eps, double alpha,
                                                       const double* eta, double particle_radius,
                                                       phlab_corrector** out);
/* w: 3x3 corrector matrix; region: 0 hole, 1 inner, 2 blend, 3 outer (may be NULL). */
PHLAB_API phlab_status phlab_corrector_eval(const phlab_corrector* corrector, const double x[3], double w[9],
                                            int* region);
PHLAB_API phlab_status phlab_corrector_norm(const phlab_corrector* corrector, phlab_corrector_quantity quantity,
                                            double p, size_t particle, double* out);
PHLAB_API void phlab_corrector_free(phlab_corrector* corrector);

typedef struct phlab_resistance {
  double R[9];
  size_t vertices;
  size_t faces;
  double mesh_spacing;
  double reg_eps;
} phlab_resistance;

/* reg_eps <= 0 selects the default blob size. */
PHLAB_API phlab_status phlab_resistance_sphere(double radius, int level, double reg_eps, unsigned threads,
                                               phlab_resistance* out);
PHLAB_API phlab_status phlab_resistance_mesh_file(const char* path, int level, double reg_eps, unsigned threads,
                                                  phlab_resistance* out);

typedef struct phlab_brinkman_gap {
  double gap;
  double column_gap[3];
  double m_pairing[3];
  double rho_r_pairing[3];
  double w2_term;
  double smear_term;
  double cube_h1_term;
  double cube_l2_term;
  double w2;
  double psi_h1;
} phlab_brinkman_gap;

/* Gaussian test field amplitude * exp(-|x - center|^2 / (2 sigma^2)).
   w2 < 0 computes W2(rho_eps, rho) by transport against an independent
   sample drawn with w2_seed. */
PHLAB_API phlab_status phlab_brinkman_gap_gaussian(const phlab_configuration* config, double beta, double m_eta,
                                                   const double R[9], const phlab_density* density,
                                                   const double psi_center[3], double sigma,
                                                   const double amplitude[3], const phlab_box* box, double lambda,
                                                   double particle_radius, double w2, uint64_t w2_seed,
                                                   unsigned threads, phlab_brinkman_gap* out);

/* ---- experiments -------------------------------------------------------- */

typedef struct phlab_config phlab_config;
typedef struct phlab_report phlab_report;

PHLAB_API phlab_status phlab_config_load(const char* path, phlab_config** out);
PHLAB_API phlab_status phlab_config_parse(const char* json, phlab_config** out);
PHLAB_API phlab_status phlab_config_validate(const phlab_config* config);
PHLAB_API phlab_status phlab_config_hash(const phlab_config* config, uint64_t* out);
PHLAB_API const char* phlab_config_output(const phlab_config* config);
PHLAB_API phlab_status phlab_config_set_output(phlab_config* config, const char* path);
/* Canonical JSON. Copies at most cap bytes including the terminator; *needed
   receives the full size. PHLAB_E_BUFFER_TOO_SMALL if cap < *needed. */
PHLAB_API phlab_status phlab_config_to_json(const phlab_config* config, char* buf, size_t cap, size_t* needed);
PHLAB_API void phlab_config_free(phlab_config* config);

PHLAB_API phlab_status phlab_run(const phlab_config* config, unsigned threads, phlab_report** out);
PHLAB_API phlab_status phlab_run_oracles(const phlab_config* config, unsigned threads, phlab_report** out);
/* Appends the rows to the table at path and writes path + ".json". */
PHLAB_API phlab_status phlab_report_write(const phlab_report* report, const char* path);
PHLAB_API phlab_status phlab_report_tsv(const phlab_report* report, char* buf, size_t cap, size_t* needed);
PHLAB_API phlab_status phlab_report_sidecar(const phlab_report* report, char* buf, size_t cap, size_t* needed);
PHLAB_API int phlab_report_all_passed(const phlab_report* report);
PHLAB_API size_t phlab_report_row_count(const phlab_report* report);
PHLAB_API size_t phlab_report_check_count(const phlab_report* report);
/* Borrowed strings, valid until the report is freed. */
PHLAB_API phlab_status phlab_report_check(const phlab_report* report, size_t i, const char** name, int* passed,
                                          const char** detail);
PHLAB_API size_t phlab_report_fit_count(const phlab_report* report);
PHLAB_API phlab_status phlab_report_fit(const phlab_report* report, size_t i, const char** statistic,
                                        const char** abscissa, phlab_rate_fit* out);
PHLAB_API void phlab_report_free(phlab_report* report);

/* Rereads a table, regroups rows by config hash and refits. The result is a
   report whose fits cover every stored experiment; statistic names are
   prefixed with "<hash> <experiment>: ". */
PHLAB_API phlab_status phlab_report_recompute(const char* path, phlab_report** out);

#ifdef __cplusplus
}
#endif

#endif

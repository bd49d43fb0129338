/* C interface to the qopt library.
 *
 * Every function returns a qopt_status; results come back through out
 * parameters. On failure the thread-local last error (qopt_last_error_*)
 * describes what went wrong. Objects are opaque handles released with the
 * matching *_free function; passing NULL to a *_free function is a no-op.
 * Matrices are row-major. Quadrature vectors are ordered (p_1..p_N, q_1..q_N).
 */
#ifndef QOPT_QOPT_H
#define QOPT_QOPT_H

#include <stddef.h>

#if defined(QOPT_BUILDING_LIBRARY)
#define QOPT_API __attribute__((visibility("default")))
#else
#define QOPT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qopt_status {
  QOPT_OK = 0,
  QOPT_INVALID_ARGUMENT = 1,
  QOPT_DIMENSION_MISMATCH = 2,
  QOPT_SINGULAR_MATRIX = 3,
  QOPT_DEGENERATE_OVERLAP = 4,
  QOPT_RESOURCE_LIMIT = 5,
  QOPT_STEP_UNDERFLOW = 6,
  QOPT_OUT_OF_RANGE = 7,
  QOPT_CAUSTIC = 8,
  QOPT_PARSE_ERROR = 9,
  QOPT_IO_ERROR = 10,
  QOPT_INTERNAL = 11,
  QOPT_NULL_POINTER = 12
} qopt_status;

typedef struct qopt_complex {
  double re;
  double im;
} qopt_complex;

/* count equally spaced points from min to max inclusive. */
typedef struct qopt_grid {
  double min;
  double max;
  int count;
} qopt_grid;

typedef struct qopt_gaussian qopt_gaussian;
typedef struct qopt_cat qopt_cat;
typedef struct qopt_distribution qopt_distribution;
typedef struct qopt_hamiltonian qopt_hamiltonian;
typedef struct qopt_flow qopt_flow;
typedef struct qopt_profile qopt_profile;
typedef struct qopt_trajectory qopt_trajectory;
typedef struct qopt_sinogram qopt_sinogram;
typedef struct qopt_wigner_grid qopt_wigner_grid;

/* ---- library ---------------------------------------------------------- */

QOPT_API const char* qopt_version(void);
QOPT_API const char* qopt_sign_convention(void);
QOPT_API const char* qopt_status_name(qopt_status status);
/* 0 restores the hardware default. */
QOPT_API qopt_status qopt_set_threads(int threads);

QOPT_API qopt_status qopt_last_error_code(void);
QOPT_API const char* qopt_last_error_message(void);
QOPT_API const char* qopt_last_error_module(void);
QOPT_API const char* qopt_last_error_operation(void);
/* JSON path of the offending input, or "" when not applicable. */
QOPT_API const char* qopt_last_error_field(void);
QOPT_API void qopt_clear_error(void);

/* Strings returned through char** out parameters are owned by the caller. */
QOPT_API void qopt_string_free(char* s);

/* Runs the invariant suite; *report receives the JSON result. */
QOPT_API qopt_status qopt_verify(char** report, int* passed);

/* ---- hermite ---------------------------------------------------------- */

QOPT_API qopt_status qopt_hermite1d(int n, qopt_complex t, qopt_complex* out);
QOPT_API qopt_status qopt_fock_wavefunction(int n, double q, double scale, qopt_complex* out);
/* H_n^{R}(y) with R an s x s matrix. */
QOPT_API qopt_status qopt_mv_hermite(int s, const qopt_complex* r, const qopt_complex* y,
                                     const int* n, qopt_complex* out);

/* ---- gaussian --------------------------------------------------------- */

QOPT_API qopt_status qopt_gaussian_create(int n_modes, const double* mean, const double* disp,
                                          qopt_gaussian** out);
QOPT_API qopt_status qopt_gaussian_vacuum(int n_modes, qopt_gaussian** out);
QOPT_API qopt_status qopt_gaussian_coherent(int n_modes, const qopt_complex* alpha,
                                            qopt_gaussian** out);
QOPT_API qopt_status qopt_gaussian_thermal(double temperature, double omega, qopt_gaussian** out);
QOPT_API qopt_status qopt_gaussian_squeezed_vacuum(double r, qopt_gaussian** out);
QOPT_API qopt_status qopt_gaussian_from_json(const char* json, qopt_gaussian** out);
QOPT_API qopt_status qopt_gaussian_to_json(const qopt_gaussian* s, char** out);
QOPT_API void qopt_gaussian_free(qopt_gaussian* s);

QOPT_API qopt_status qopt_gaussian_n_modes(const qopt_gaussian* s, int* out);
/* mean: 2N values; disp: (2N)^2 values. */
QOPT_API qopt_status qopt_gaussian_mean(const qopt_gaussian* s, double* mean);
QOPT_API qopt_status qopt_gaussian_disp(const qopt_gaussian* s, double* disp);
QOPT_API qopt_status qopt_gaussian_purity(const qopt_gaussian* s, double* out);
/* Smallest eigenvalue of M + (i/2) Sigma. */
QOPT_API qopt_status qopt_gaussian_uncertainty(const qopt_gaussian* s, double* out);

QOPT_API qopt_status qopt_gaussian_wigner(const qopt_gaussian* s, const double* quadratures,
                                          double* out);
QOPT_API qopt_status qopt_gaussian_q(const qopt_gaussian* s, const qopt_complex* beta,
                                     double* out);
/* P0 and R (2N x 2N) of the Q-function representation. r may be NULL. */
QOPT_API qopt_status qopt_gaussian_qrep(const qopt_gaussian* s, double* p0, qopt_complex* r);
QOPT_API qopt_status qopt_gaussian_reduced(const qopt_gaussian* s, int count, const int* modes,
                                           qopt_gaussian** out);
QOPT_API qopt_status qopt_gaussian_pnd(const qopt_gaussian* s, const int* n, double* out);
QOPT_API qopt_status qopt_gaussian_distribution(const qopt_gaussian* s, double mass_target,
                                                int per_mode_cap, qopt_distribution** out);
QOPT_API qopt_status qopt_gaussian_photon_moments(const qopt_gaussian* s, int mode, double* mean,
                                                  double* variance);
/* Wigner function of the reduced state of one mode on a q x p grid. */
QOPT_API qopt_status qopt_gaussian_wigner_grid(const qopt_gaussian* s, int mode, qopt_grid q,
                                               qopt_grid p, qopt_wigner_grid** out);

/* ---- photon distributions --------------------------------------------- */

QOPT_API qopt_status qopt_distribution_size(const qopt_distribution* d, size_t* out);
QOPT_API qopt_status qopt_distribution_n_modes(const qopt_distribution* d, int* out);
/* index receives n_modes entries. */
QOPT_API qopt_status qopt_distribution_entry(const qopt_distribution* d, size_t i, int* index,
                                             double* probability);
QOPT_API qopt_status qopt_distribution_mass(const qopt_distribution* d, double* mass,
                                            int* cap_hit);
QOPT_API void qopt_distribution_free(qopt_distribution* d);

/* ---- dynamics --------------------------------------------------------- */

typedef enum qopt_system_kind { QOPT_SYSTEM_FREE = 0, QOPT_SYSTEM_OSCILLATOR = 1 } qopt_system_kind;

QOPT_API qopt_status qopt_hamiltonian_from_json(const char* json, qopt_hamiltonian** out);
/* Time-independent H = Q B Q / 2 + C Q; c may be NULL. */
QOPT_API qopt_status qopt_hamiltonian_constant(int n_modes, const double* b, const double* c,
                                               qopt_hamiltonian** out);
QOPT_API qopt_status qopt_hamiltonian_n_modes(const qopt_hamiltonian* h, int* out);
QOPT_API void qopt_hamiltonian_free(qopt_hamiltonian* h);

QOPT_API qopt_status qopt_flow_integrate(const qopt_hamiltonian* h, double t_end, double tol,
                                         int n_intervals, qopt_flow** out);
QOPT_API qopt_status qopt_flow_size(const qopt_flow* f, size_t* out);
/* lambda: (2N)^2 values, delta: 2N values; either may be NULL. */
QOPT_API qopt_status qopt_flow_sample(const qopt_flow* f, size_t i, double* t, double* lambda,
                                      double* delta);
QOPT_API qopt_status qopt_flow_max_defect(const qopt_flow* f, double* out);
QOPT_API qopt_status qopt_flow_evolve(const qopt_flow* f, const qopt_gaussian* s, double t,
                                      qopt_gaussian** out);
QOPT_API void qopt_flow_free(qopt_flow* f);

QOPT_API qopt_status qopt_propagator_position(qopt_system_kind kind, double mass, double omega,
                                              double q, double qp, double t, qopt_complex* out);
QOPT_API qopt_status qopt_propagator_coherent(qopt_complex alpha, qopt_complex beta, double omega,
                                              double t, qopt_complex* out);
QOPT_API qopt_status qopt_propagator_fock(int n, int m, double omega, double t, qopt_complex* out);
QOPT_API qopt_status qopt_residual_check(qopt_system_kind kind, double mass, double omega, double t,
                                         double* momentum_residual, double* position_residual);

/* ---- parametric ------------------------------------------------------- */

QOPT_API qopt_status qopt_profile_from_json(const char* json, qopt_profile** out);
QOPT_API void qopt_profile_free(qopt_profile* p);

/* n_intervals = 0 picks a sample spacing of at most 0.05. */
QOPT_API qopt_status qopt_epsilon_solve(const qopt_profile* p, double t_end, double tol,
                                        int n_intervals, qopt_trajectory** out);
QOPT_API qopt_status qopt_trajectory_size(const qopt_trajectory* tr, size_t* out);
QOPT_API qopt_status qopt_trajectory_sample(const qopt_trajectory* tr, size_t i, double* t,
                                            qopt_complex* eps, qopt_complex* deps, double* phase);
QOPT_API qopt_status qopt_trajectory_at(const qopt_trajectory* tr, double t, qopt_complex* eps,
                                        qopt_complex* deps, double* phase);
QOPT_API qopt_status qopt_trajectory_wronskian_defect(const qopt_trajectory* tr, double* out);
QOPT_API qopt_status qopt_trajectory_variances(const qopt_trajectory* tr, double t,
                                               double* sigma_x, double* sigma_p, double* r);
QOPT_API qopt_status qopt_squeezed_vacuum_pnd(const qopt_trajectory* tr, double t, int n,
                                              double* out);
QOPT_API qopt_status qopt_squeezed_vacuum_state(const qopt_trajectory* tr, double t,
                                                qopt_gaussian** out);
QOPT_API void qopt_trajectory_free(qopt_trajectory* tr);

/* ---- cats ------------------------------------------------------------- */

QOPT_API qopt_status qopt_cat_create(int n_modes, const qopt_complex* amplitudes, int odd,
                                     qopt_cat** out);
QOPT_API qopt_status qopt_cat_from_json(const char* json, qopt_cat** out);
QOPT_API void qopt_cat_free(qopt_cat* c);
QOPT_API qopt_status qopt_cat_n_modes(const qopt_cat* c, int* out);
QOPT_API qopt_status qopt_cat_normalization(const qopt_cat* c, double* out);
QOPT_API qopt_status qopt_cat_pnd(const qopt_cat* c, const int* n, double* out);
QOPT_API qopt_status qopt_cat_distribution(const qopt_cat* c, double mass_target,
                                           int per_mode_cap, qopt_distribution** out);
/* mean_n and mandel_q: N values; covariance: N^2 values. Any may be NULL. */
QOPT_API qopt_status qopt_cat_moments(const qopt_cat* c, double* mean_n, double* covariance,
                                      double* mandel_q);
QOPT_API qopt_status qopt_cat_q(const qopt_cat* c, const qopt_complex* beta, double* out);
QOPT_API qopt_status qopt_cat_wigner(const qopt_cat* c, const double* q, const double* p,
                                     double* out);
/* Single-mode cats only. */
QOPT_API qopt_status qopt_cat_wigner_grid(const qopt_cat* c, qopt_grid q, qopt_grid p,
                                          qopt_wigner_grid** out);

/* ---- tomography ------------------------------------------------------- */

QOPT_API qopt_status qopt_wigner_grid_create(qopt_grid q, qopt_grid p, const double* values,
                                             qopt_wigner_grid** out);
QOPT_API qopt_status qopt_wigner_grid_axes(const qopt_wigner_grid* w, qopt_grid* q, qopt_grid* p);
/* values: q.count * p.count entries, W(q_i, p_j) at i * p.count + j. */
QOPT_API qopt_status qopt_wigner_grid_values(const qopt_wigner_grid* w, double* values);
QOPT_API qopt_status qopt_wigner_grid_normalization(const qopt_wigner_grid* w, double* out);
QOPT_API void qopt_wigner_grid_free(qopt_wigner_grid* w);

/* Sinogram on angles theta_k = k pi / n_angles. */
QOPT_API qopt_status qopt_sinogram_from_gaussian(const qopt_gaussian* s, int n_angles, qopt_grid x,
                                                 qopt_sinogram** out);
QOPT_API qopt_status qopt_sinogram_from_cat(const qopt_cat* c, int n_angles, qopt_grid x,
                                            double v_max, int n_v, qopt_sinogram** out);
QOPT_API qopt_status qopt_sinogram_from_wigner_grid(const qopt_wigner_grid* w, int n_angles,
                                                    qopt_grid x, qopt_sinogram** out);
/* values: n_angles * x.count entries, w(x_j, theta_i) at i * x.count + j. */
QOPT_API qopt_status qopt_sinogram_create(int n_angles, const double* theta, qopt_grid x,
                                          const double* values, qopt_sinogram** out);
QOPT_API qopt_status qopt_sinogram_shape(const qopt_sinogram* s, int* n_angles, qopt_grid* x);
/* theta: n_angles entries; values laid out as in qopt_sinogram_create. */
QOPT_API qopt_status qopt_sinogram_data(const qopt_sinogram* s, double* theta, double* values);
QOPT_API qopt_status qopt_sinogram_max_slice_defect(const qopt_sinogram* s, double* out);
QOPT_API void qopt_sinogram_free(qopt_sinogram* s);

QOPT_API qopt_status qopt_inverse_radon(const qopt_sinogram* s, qopt_grid q, qopt_grid p,
                                        double reg_s, qopt_wigner_grid** out);
/* Density of X = mu q + nu p + delta on x; out receives x.count values. */
QOPT_API qopt_status qopt_symplectic_marginal(const qopt_wigner_grid* w, double mu, double nu,
                                              double delta, qopt_grid x, double* out);
/* Builds n_directions symplectic marginals of w and inverts them onto q x p. */
QOPT_API qopt_status qopt_wigner_from_symplectic(const qopt_wigner_grid* w, int n_directions,
                                                 qopt_grid x, qopt_grid q, qopt_grid p,
                                                 double reg_s, qopt_wigner_grid** out);

#ifdef __cplusplus
}
#endif

#endif /* QOPT_QOPT_H */

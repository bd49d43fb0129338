/* Exercises the C interface from C. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "qopt/qopt.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

#define EXPECT_OK(call) EXPECT((call) == QOPT_OK)

static const double kPi = 3.14159265358979323846;

static void test_library(void) {
  EXPECT(strlen(qopt_version()) > 0);
  EXPECT(strlen(qopt_sign_convention()) > 0);
  EXPECT(strcmp(qopt_status_name(QOPT_OK), "ok") == 0);
  EXPECT(strcmp(qopt_status_name(QOPT_PARSE_ERROR), "parse_error") == 0);
  EXPECT_OK(qopt_set_threads(1));
  EXPECT(qopt_set_threads(-1) == QOPT_INVALID_ARGUMENT);

  char* report = NULL;
  int passed = 0;
  EXPECT_OK(qopt_verify(&report, &passed));
  EXPECT(passed == 1);
  EXPECT(report != NULL && strstr(report, "\"passed\"") != NULL);
  qopt_string_free(report);
}

static void test_errors(void) {
  qopt_gaussian* s = NULL;
  EXPECT(qopt_gaussian_vacuum(0, &s) == QOPT_INVALID_ARGUMENT);
  EXPECT(s == NULL);
  EXPECT(qopt_last_error_code() == QOPT_INVALID_ARGUMENT);
  EXPECT(strcmp(qopt_last_error_module(), "gaussian") == 0);
  EXPECT(strlen(qopt_last_error_message()) > 0);
  qopt_clear_error();
  EXPECT(qopt_last_error_code() == QOPT_OK);

  EXPECT(qopt_gaussian_vacuum(1, NULL) == QOPT_NULL_POINTER);
  EXPECT(qopt_gaussian_n_modes(NULL, NULL) == QOPT_NULL_POINTER);

  EXPECT(qopt_gaussian_from_json("{\"type\":\"coherent\",\"alpha\":[1,\"x\"]}", &s) ==
         QOPT_PARSE_ERROR);
  EXPECT(strcmp(qopt_last_error_field(), "alpha[1]") == 0);
  EXPECT(qopt_gaussian_from_json("{not json", &s) == QOPT_PARSE_ERROR);
  qopt_gaussian_free(NULL);
  qopt_cat_free(NULL);
}

static void test_gaussian(void) {
  qopt_complex alpha = {1.5, 0.0};
  qopt_gaussian* coh = NULL;
  EXPECT_OK(qopt_gaussian_coherent(1, &alpha, &coh));
  for (int n = 0; n <= 20; ++n) {
    double p = 0.0;
    EXPECT_OK(qopt_gaussian_pnd(coh, &n, &p));
    const double expect = exp(-2.25 + n * log(2.25) - lgamma(n + 1.0));
    EXPECT(fabs(p - expect) <= 1e-10);
  }
  double mean = 0.0;
  double var = 0.0;
  EXPECT_OK(qopt_gaussian_photon_moments(coh, 0, &mean, &var));
  EXPECT(fabs(mean - 2.25) < 1e-12);
  EXPECT(fabs(var - 2.25) < 1e-7);

  double purity = 0.0;
  EXPECT_OK(qopt_gaussian_purity(coh, &purity));
  EXPECT(fabs(purity - 1.0) < 1e-12);

  double quad[2] = {0.0, sqrt(2.0) * 1.5};
  double w = 0.0;
  EXPECT_OK(qopt_gaussian_wigner(coh, quad, &w));
  EXPECT(fabs(w - 2.0) < 1e-12);

  char* text = NULL;
  EXPECT_OK(qopt_gaussian_to_json(coh, &text));
  qopt_gaussian* back = NULL;
  EXPECT_OK(qopt_gaussian_from_json(text, &back));
  qopt_string_free(text);
  double m[2];
  EXPECT_OK(qopt_gaussian_mean(back, m));
  EXPECT(fabs(m[1] - sqrt(2.0) * 1.5) < 1e-15);
  qopt_gaussian_free(back);

  qopt_distribution* d = NULL;
  EXPECT_OK(qopt_gaussian_distribution(coh, 1.0 - 1e-10, 64, &d));
  double mass = 0.0;
  int cap_hit = 1;
  EXPECT_OK(qopt_distribution_mass(d, &mass, &cap_hit));
  EXPECT(mass >= 1.0 - 1e-10 && cap_hit == 0);
  size_t size = 0;
  EXPECT_OK(qopt_distribution_size(d, &size));
  EXPECT(size > 10);
  int idx = -1;
  double p = 0.0;
  EXPECT_OK(qopt_distribution_entry(d, 3, &idx, &p));
  EXPECT(idx == 3);
  EXPECT(qopt_distribution_entry(d, size, &idx, &p) == QOPT_OUT_OF_RANGE);
  qopt_distribution_free(d);

  qopt_gaussian* sq = NULL;
  EXPECT_OK(qopt_gaussian_squeezed_vacuum(1.0, &sq));
  int two = 2;
  EXPECT_OK(qopt_gaussian_pnd(sq, &two, &p));
  const double t = tanh(1.0);
  EXPECT(fabs(p - 0.5 * t * t / cosh(1.0)) < 1e-12);
  qopt_gaussian_free(sq);
  qopt_gaussian_free(coh);

  double disp[4] = {0.5, 0.3, 0.0, 0.5};
  double mean2[2] = {0.0, 0.0};
  qopt_gaussian* bad = NULL;
  EXPECT(qopt_gaussian_create(1, mean2, disp, &bad) == QOPT_INVALID_ARGUMENT);
}

static void test_dynamics(void) {
  qopt_hamiltonian* h = NULL;
  EXPECT_OK(qopt_hamiltonian_from_json("{\"preset\":\"oscillator\"}", &h));
  qopt_flow* f = NULL;
  EXPECT_OK(qopt_flow_integrate(h, 2.0 * kPi, 1e-10, 100, &f));
  double defect = 1.0;
  EXPECT_OK(qopt_flow_max_defect(f, &defect));
  EXPECT(defect < 1e-8);
  size_t n = 0;
  EXPECT_OK(qopt_flow_size(f, &n));
  EXPECT(n == 101);
  double t = 0.0;
  double lambda[4];
  double delta[2];
  EXPECT_OK(qopt_flow_sample(f, 25, &t, lambda, delta));
  EXPECT(fabs(lambda[0] - cos(t)) < 1e-8 && fabs(lambda[1] - sin(t)) < 1e-8);
  qopt_flow_free(f);
  qopt_hamiltonian_free(h);

  qopt_complex g;
  EXPECT_OK(qopt_propagator_fock(0, 0, 1.0, 2.0 * kPi, &g));
  EXPECT(fabs(g.re + 1.0) < 1e-14 && fabs(g.im) < 1e-14);
  EXPECT(qopt_propagator_position(QOPT_SYSTEM_OSCILLATOR, 1.0, 1.0, 0.1, 0.2, kPi, &g) == QOPT_CAUSTIC);
}

static void test_parametric_and_cats(void) {
  qopt_profile* prof = NULL;
  EXPECT_OK(qopt_profile_from_json("{\"preset\":\"free\"}", &prof));
  qopt_trajectory* tr = NULL;
  EXPECT_OK(qopt_epsilon_solve(prof, 5.0, 1e-10, 0, &tr));
  qopt_complex eps;
  qopt_complex deps;
  double phase = 0.0;
  EXPECT_OK(qopt_trajectory_at(tr, 2.0, &eps, &deps, &phase));
  EXPECT(fabs(eps.re - 1.0) < 1e-12 && fabs(eps.im - 2.0) < 1e-12);
  EXPECT(qopt_trajectory_at(tr, 6.0, &eps, &deps, &phase) == QOPT_OUT_OF_RANGE);
  double p0 = 0.0;
  EXPECT_OK(qopt_squeezed_vacuum_pnd(tr, 2.0, 0, &p0));
  EXPECT(fabs(p0 - 2.0 / sqrt(5.0 + 1.0 + 2.0)) < 1e-12);
  qopt_trajectory_free(tr);
  qopt_profile_free(prof);

  qopt_complex a = {1.5, 0.0};
  qopt_cat* odd = NULL;
  EXPECT_OK(qopt_cat_create(1, &a, 1, &odd));
  double q = 0.0;
  double p = 0.0;
  double w = 0.0;
  EXPECT_OK(qopt_cat_wigner(odd, &q, &p, &w));
  EXPECT(fabs(w + 2.0) < 1e-12);
  int zero = 0;
  double pz = 1.0;
  EXPECT_OK(qopt_cat_pnd(odd, &zero, &pz));
  EXPECT(pz == 0.0);
  double mandel = 0.0;
  EXPECT_OK(qopt_cat_moments(odd, NULL, NULL, &mandel));
  EXPECT(mandel < 0.0);
  qopt_cat_free(odd);

  qopt_complex z = {0.0, 0.0};
  qopt_cat* bad = NULL;
  EXPECT(qopt_cat_create(1, &z, 1, &bad) == QOPT_INVALID_ARGUMENT);
}

static void test_tomography(void) {
  qopt_gaussian* vac = NULL;
  EXPECT_OK(qopt_gaussian_vacuum(1, &vac));
  qopt_grid x = {-8.0, 8.0, 129};
  qopt_grid g = {-2.0, 2.0, 11};
  qopt_sinogram* s = NULL;
  EXPECT_OK(qopt_sinogram_from_gaussian(vac, 64, x, &s));
  double defect = 1.0;
  EXPECT_OK(qopt_sinogram_max_slice_defect(s, &defect));
  EXPECT(defect < 1e-6);
  qopt_wigner_grid* rec = NULL;
  EXPECT_OK(qopt_inverse_radon(s, g, g, 1e-2, &rec));
  double values[121];
  EXPECT_OK(qopt_wigner_grid_values(rec, values));
  EXPECT(fabs(values[60] - 2.0) < 0.04);
  qopt_wigner_grid_free(rec);
  qopt_sinogram_free(s);

  EXPECT_OK(qopt_sinogram_from_gaussian(vac, 16, x, &s));
  EXPECT(qopt_inverse_radon(s, g, g, 1e-2, &rec) == QOPT_INVALID_ARGUMENT);
  qopt_sinogram_free(s);

  qopt_grid bad = {1.0, -1.0, 11};
  EXPECT(qopt_sinogram_from_gaussian(vac, 64, bad, &s) == QOPT_INVALID_ARGUMENT);
  qopt_gaussian_free(vac);
}

int main(void) {
  test_library();
  test_errors();
  test_gaussian();
  test_dynamics();
  test_parametric_and_cats();
  test_tomography();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}

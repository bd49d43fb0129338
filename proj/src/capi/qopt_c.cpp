#include "qopt/qopt.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <vector>

#include "qopt/cats.hpp"
#include "qopt/dynamics.hpp"
#include "qopt/errors.hpp"
#include "qopt/gaussian.hpp"
#include "qopt/hermite.hpp"
#include "qopt/parallel.hpp"
#include "qopt/parametric.hpp"
#include "qopt/serialization.hpp"
#include "qopt/tomography.hpp"
#include "qopt/verify.hpp"

using namespace qopt;

struct qopt_gaussian {
  gaussian::GaussianState state;
};
struct qopt_cat {
  cats::CatState state;
};
struct qopt_distribution {
  int n_modes;
  gaussian::PhotonDistribution dist;
};
struct qopt_hamiltonian {
  dynamics::QuadraticHamiltonian h;
};
struct qopt_flow {
  dynamics::SymplecticFlow flow;
};
struct qopt_profile {
  parametric::FrequencyProfile profile;
};
struct qopt_trajectory {
  parametric::EpsilonTrajectory traj;
};
struct qopt_sinogram {
  tomography::Sinogram sino;
};
struct qopt_wigner_grid {
  tomography::WignerGrid grid;
};

namespace {

struct LastError {
  qopt_status code = QOPT_OK;
  std::string message;
  std::string module;
  std::string operation;
  std::string field;
};

thread_local LastError g_error;

qopt_status fail(qopt_status code, std::string message, std::string module, std::string op,
                 std::string field = {}) {
  g_error = {code, std::move(message), std::move(module), std::move(op), std::move(field)};
  return code;
}

// Runs f, translating exceptions into status codes and the last-error record.
template <class F>
qopt_status guard(const char* op, F&& f) {
  try {
    f();
    return QOPT_OK;
  } catch (const Error& e) {
    return fail(static_cast<qopt_status>(e.code()), e.what(), e.module(), e.operation(),
                e.field());
  } catch (const std::bad_alloc&) {
    return fail(QOPT_RESOURCE_LIMIT, "out of memory", "capi", op);
  } catch (const std::exception& e) {
    return fail(QOPT_INTERNAL, e.what(), "capi", op);
  } catch (...) {
    return fail(QOPT_INTERNAL, "unknown exception", "capi", op);
  }
}

#define QOPT_REQUIRE(ptr, op)                                                     \
  do {                                                                            \
    if ((ptr) == nullptr) return fail(QOPT_NULL_POINTER, #ptr " is null", "capi", op); \
  } while (0)

cplx to_cplx(qopt_complex z) { return {z.re, z.im}; }
qopt_complex from_cplx(cplx z) { return {z.real(), z.imag()}; }

tomography::UniformGrid to_grid(qopt_grid g) { return {g.min, g.max, g.count}; }
qopt_grid from_grid(const tomography::UniformGrid& g) { return {g.min, g.max, g.count}; }

VectorXcd cvector(const qopt_complex* v, int n) {
  VectorXcd out(n);
  for (int i = 0; i < n; ++i) out(i) = to_cplx(v[i]);
  return out;
}

void copy_row_major(const MatrixXd& m, double* out) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) *out++ = m(r, c);
  }
}

MatrixXd read_row_major(const double* v, Eigen::Index rows, Eigen::Index cols) {
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = *v++;
  }
  return m;
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

nlohmann::json parse_json(const char* text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::parse_error, "serialization", "parse", e.what(), "<root>");
  }
}

hermite::MultiIndex multi_index(const int* n, int modes) {
  return hermite::MultiIndex(std::vector<int>(n, n + modes));
}

void check_index(std::size_t i, std::size_t size, const char* op) {
  if (i >= size) {
    raise(ErrorCode::out_of_range, "capi", op,
          "index " + std::to_string(i) + " >= size " + std::to_string(size));
  }
}

std::vector<double> uniform_angles(int n) { return tomography::uniform_angles(n); }

}  // namespace

extern "C" {

const char* qopt_version(void) { return QOPT_VERSION; }

const char* qopt_sign_convention(void) {
  static const std::string tag(gaussian::kSignConvention);
  return tag.c_str();
}

const char* qopt_status_name(qopt_status status) {
  switch (status) {
    case QOPT_OK: return "ok";
    case QOPT_NULL_POINTER: return "null_pointer";
    default:
      if (status >= QOPT_INVALID_ARGUMENT && status <= QOPT_INTERNAL) {
        return to_string(static_cast<ErrorCode>(status)).data();
      }
      return "unknown";
  }
}

qopt_status qopt_set_threads(int threads) {
  return guard("set_threads", [&] { set_thread_count(threads); });
}

qopt_status qopt_last_error_code(void) { return g_error.code; }
const char* qopt_last_error_message(void) { return g_error.message.c_str(); }
const char* qopt_last_error_module(void) { return g_error.module.c_str(); }
const char* qopt_last_error_operation(void) { return g_error.operation.c_str(); }
const char* qopt_last_error_field(void) { return g_error.field.c_str(); }
void qopt_clear_error(void) { g_error = {}; }

void qopt_string_free(char* s) { std::free(s); }

qopt_status qopt_verify(char** report, int* passed) {
  QOPT_REQUIRE(report, "verify");
  return guard("verify", [&] {
    const auto result = run_verification();
    if (passed != nullptr) *passed = result.at("passed").get<bool>() ? 1 : 0;
    *report = dup_string(result.dump(2));
  });
}

// ---- hermite

qopt_status qopt_hermite1d(int n, qopt_complex t, qopt_complex* out) {
  QOPT_REQUIRE(out, "hermite1d");
  return guard("hermite1d", [&] { *out = from_cplx(hermite::hermite1d(n, to_cplx(t))); });
}

qopt_status qopt_fock_wavefunction(int n, double q, double scale, qopt_complex* out) {
  QOPT_REQUIRE(out, "fock_wavefunction");
  return guard("fock_wavefunction",
               [&] { *out = from_cplx(hermite::fock_wavefunction(n, q, scale)); });
}

qopt_status qopt_mv_hermite(int s, const qopt_complex* r, const qopt_complex* y, const int* n,
                            qopt_complex* out) {
  QOPT_REQUIRE(r, "mv_hermite");
  QOPT_REQUIRE(y, "mv_hermite");
  QOPT_REQUIRE(n, "mv_hermite");
  QOPT_REQUIRE(out, "mv_hermite");
  return guard("mv_hermite", [&] {
    if (s < 1) raise(ErrorCode::invalid_argument, "hermite", "mv_hermite", "s must be >= 1");
    MatrixXcd rm(s, s);
    for (int i = 0; i < s; ++i) {
      for (int j = 0; j < s; ++j) rm(i, j) = to_cplx(r[i * s + j]);
    }
    const hermite::HermiteParams params(rm, cvector(y, s));
    *out = from_cplx(hermite::mv_hermite(params, multi_index(n, s)));
  });
}

// ---- gaussian

qopt_status qopt_gaussian_create(int n_modes, const double* mean, const double* disp,
                                 qopt_gaussian** out) {
  QOPT_REQUIRE(mean, "gaussian_create");
  QOPT_REQUIRE(disp, "gaussian_create");
  QOPT_REQUIRE(out, "gaussian_create");
  return guard("gaussian_create", [&] {
    if (n_modes < 1) {
      raise(ErrorCode::invalid_argument, "gaussian", "GaussianState", "n_modes must be >= 1");
    }
    const int d = 2 * n_modes;
    VectorXd m = Eigen::Map<const VectorXd>(mean, d);
    *out = new qopt_gaussian{gaussian::GaussianState(m, read_row_major(disp, d, d))};
  });
}

qopt_status qopt_gaussian_vacuum(int n_modes, qopt_gaussian** out) {
  QOPT_REQUIRE(out, "gaussian_vacuum");
  return guard("gaussian_vacuum", [&] { *out = new qopt_gaussian{gaussian::make_vacuum(n_modes)}; });
}

qopt_status qopt_gaussian_coherent(int n_modes, const qopt_complex* alpha, qopt_gaussian** out) {
  QOPT_REQUIRE(alpha, "gaussian_coherent");
  QOPT_REQUIRE(out, "gaussian_coherent");
  return guard("gaussian_coherent", [&] {
    if (n_modes < 1) {
      raise(ErrorCode::invalid_argument, "gaussian", "make_coherent", "n_modes must be >= 1");
    }
    const VectorXcd a = cvector(alpha, n_modes);
    *out = new qopt_gaussian{
        gaussian::make_coherent(std::span<const cplx>(a.data(), static_cast<std::size_t>(n_modes)))};
  });
}

qopt_status qopt_gaussian_thermal(double temperature, double omega, qopt_gaussian** out) {
  QOPT_REQUIRE(out, "gaussian_thermal");
  return guard("gaussian_thermal", [&] {
    *out = new qopt_gaussian{gaussian::make_thermal_oscillator(temperature, omega)};
  });
}

qopt_status qopt_gaussian_squeezed_vacuum(double r, qopt_gaussian** out) {
  QOPT_REQUIRE(out, "gaussian_squeezed_vacuum");
  return guard("gaussian_squeezed_vacuum",
               [&] { *out = new qopt_gaussian{gaussian::make_squeezed_vacuum(r)}; });
}

qopt_status qopt_gaussian_from_json(const char* json, qopt_gaussian** out) {
  QOPT_REQUIRE(json, "gaussian_from_json");
  QOPT_REQUIRE(out, "gaussian_from_json");
  return guard("gaussian_from_json", [&] {
    *out = new qopt_gaussian{serialization::gaussian_from_json(parse_json(json), "")};
  });
}

qopt_status qopt_gaussian_to_json(const qopt_gaussian* s, char** out) {
  QOPT_REQUIRE(s, "gaussian_to_json");
  QOPT_REQUIRE(out, "gaussian_to_json");
  return guard("gaussian_to_json",
               [&] { *out = dup_string(serialization::gaussian_to_json(s->state).dump()); });
}

void qopt_gaussian_free(qopt_gaussian* s) { delete s; }

qopt_status qopt_gaussian_n_modes(const qopt_gaussian* s, int* out) {
  QOPT_REQUIRE(s, "gaussian_n_modes");
  QOPT_REQUIRE(out, "gaussian_n_modes");
  *out = s->state.n_modes();
  return QOPT_OK;
}

qopt_status qopt_gaussian_mean(const qopt_gaussian* s, double* mean) {
  QOPT_REQUIRE(s, "gaussian_mean");
  QOPT_REQUIRE(mean, "gaussian_mean");
  std::copy(s->state.mean().data(), s->state.mean().data() + s->state.mean().size(), mean);
  return QOPT_OK;
}

qopt_status qopt_gaussian_disp(const qopt_gaussian* s, double* disp) {
  QOPT_REQUIRE(s, "gaussian_disp");
  QOPT_REQUIRE(disp, "gaussian_disp");
  copy_row_major(s->state.disp(), disp);
  return QOPT_OK;
}

qopt_status qopt_gaussian_purity(const qopt_gaussian* s, double* out) {
  QOPT_REQUIRE(s, "gaussian_purity");
  QOPT_REQUIRE(out, "gaussian_purity");
  return guard("gaussian_purity", [&] { *out = gaussian::validate_state(s->state).purity; });
}

qopt_status qopt_gaussian_uncertainty(const qopt_gaussian* s, double* out) {
  QOPT_REQUIRE(s, "gaussian_uncertainty");
  QOPT_REQUIRE(out, "gaussian_uncertainty");
  return guard("gaussian_uncertainty",
               [&] { *out = gaussian::validate_state(s->state).min_uncertainty_eigenvalue; });
}

qopt_status qopt_gaussian_wigner(const qopt_gaussian* s, const double* quadratures, double* out) {
  QOPT_REQUIRE(s, "gaussian_wigner");
  QOPT_REQUIRE(quadratures, "gaussian_wigner");
  QOPT_REQUIRE(out, "gaussian_wigner");
  return guard("gaussian_wigner", [&] {
    const VectorXd x = Eigen::Map<const VectorXd>(quadratures, 2 * s->state.n_modes());
    *out = gaussian::wigner_eval(s->state, x);
  });
}

qopt_status qopt_gaussian_q(const qopt_gaussian* s, const qopt_complex* beta, double* out) {
  QOPT_REQUIRE(s, "gaussian_q");
  QOPT_REQUIRE(beta, "gaussian_q");
  QOPT_REQUIRE(out, "gaussian_q");
  return guard("gaussian_q", [&] {
    const VectorXcd b = cvector(beta, s->state.n_modes());
    *out = gaussian::q_eval(s->state, std::span<const cplx>(b.data(), static_cast<std::size_t>(b.size())));
  });
}

qopt_status qopt_gaussian_qrep(const qopt_gaussian* s, double* p0, qopt_complex* r) {
  QOPT_REQUIRE(s, "gaussian_qrep");
  QOPT_REQUIRE(p0, "gaussian_qrep");
  return guard("gaussian_qrep", [&] {
    const auto q = gaussian::to_qrep(s->state);
    *p0 = q.p0;
    if (r != nullptr) {
      for (Eigen::Index i = 0; i < q.R.rows(); ++i) {
        for (Eigen::Index j = 0; j < q.R.cols(); ++j) *r++ = from_cplx(q.R(i, j));
      }
    }
  });
}

qopt_status qopt_gaussian_reduced(const qopt_gaussian* s, int count, const int* modes,
                                  qopt_gaussian** out) {
  QOPT_REQUIRE(s, "gaussian_reduced");
  QOPT_REQUIRE(modes, "gaussian_reduced");
  QOPT_REQUIRE(out, "gaussian_reduced");
  return guard("gaussian_reduced", [&] {
    if (count < 1) raise(ErrorCode::invalid_argument, "gaussian", "reduced_state", "count must be >= 1");
    *out = new qopt_gaussian{gaussian::reduced_state(
        s->state, std::span<const int>(modes, static_cast<std::size_t>(count)))};
  });
}

qopt_status qopt_gaussian_pnd(const qopt_gaussian* s, const int* n, double* out) {
  QOPT_REQUIRE(s, "gaussian_pnd");
  QOPT_REQUIRE(n, "gaussian_pnd");
  QOPT_REQUIRE(out, "gaussian_pnd");
  return guard("gaussian_pnd", [&] {
    *out = gaussian::photon_pnd(s->state, multi_index(n, s->state.n_modes()));
  });
}

qopt_status qopt_gaussian_distribution(const qopt_gaussian* s, double mass_target,
                                       int per_mode_cap, qopt_distribution** out) {
  QOPT_REQUIRE(s, "gaussian_distribution");
  QOPT_REQUIRE(out, "gaussian_distribution");
  return guard("gaussian_distribution", [&] {
    gaussian::PndOptions opts;
    opts.mass_target = mass_target;
    opts.per_mode_cap = per_mode_cap;
    *out = new qopt_distribution{s->state.n_modes(), gaussian::photon_distribution(s->state, opts)};
  });
}

qopt_status qopt_gaussian_photon_moments(const qopt_gaussian* s, int mode, double* mean,
                                         double* variance) {
  QOPT_REQUIRE(s, "gaussian_photon_moments");
  return guard("gaussian_photon_moments", [&] {
    const auto m = gaussian::photon_moments(s->state, mode);
    if (mean != nullptr) *mean = m.mean;
    if (variance != nullptr) *variance = m.variance;
  });
}

qopt_status qopt_gaussian_wigner_grid(const qopt_gaussian* s, int mode, qopt_grid q, qopt_grid p,
                                      qopt_wigner_grid** out) {
  QOPT_REQUIRE(s, "gaussian_wigner_grid");
  QOPT_REQUIRE(out, "gaussian_wigner_grid");
  return guard("gaussian_wigner_grid", [&] {
    const int modes[] = {mode};
    const auto reduced = gaussian::reduced_state(s->state, modes);
    auto w = [&reduced](double qq, double pp) {
      VectorXd x(2);
      x << pp, qq;
      return gaussian::wigner_eval(reduced, x);
    };
    *out = new qopt_wigner_grid{tomography::sample_wigner(w, to_grid(q), to_grid(p))};
  });
}

// ---- distributions

qopt_status qopt_distribution_size(const qopt_distribution* d, size_t* out) {
  QOPT_REQUIRE(d, "distribution_size");
  QOPT_REQUIRE(out, "distribution_size");
  *out = d->dist.indices.size();
  return QOPT_OK;
}

qopt_status qopt_distribution_n_modes(const qopt_distribution* d, int* out) {
  QOPT_REQUIRE(d, "distribution_n_modes");
  QOPT_REQUIRE(out, "distribution_n_modes");
  *out = d->n_modes;
  return QOPT_OK;
}

qopt_status qopt_distribution_entry(const qopt_distribution* d, size_t i, int* index,
                                    double* probability) {
  QOPT_REQUIRE(d, "distribution_entry");
  return guard("distribution_entry", [&] {
    check_index(i, d->dist.indices.size(), "distribution_entry");
    if (index != nullptr) {
      const auto& idx = d->dist.indices[i];
      for (std::size_t k = 0; k < idx.size(); ++k) index[k] = idx[k];
    }
    if (probability != nullptr) *probability = d->dist.probabilities[i];
  });
}

qopt_status qopt_distribution_mass(const qopt_distribution* d, double* mass, int* cap_hit) {
  QOPT_REQUIRE(d, "distribution_mass");
  if (mass != nullptr) *mass = d->dist.mass;
  if (cap_hit != nullptr) *cap_hit = d->dist.cap_hit ? 1 : 0;
  return QOPT_OK;
}

void qopt_distribution_free(qopt_distribution* d) { delete d; }

// ---- dynamics

qopt_status qopt_hamiltonian_from_json(const char* json, qopt_hamiltonian** out) {
  QOPT_REQUIRE(json, "hamiltonian_from_json");
  QOPT_REQUIRE(out, "hamiltonian_from_json");
  return guard("hamiltonian_from_json", [&] {
    *out = new qopt_hamiltonian{serialization::hamiltonian_from_json(parse_json(json), "")};
  });
}

qopt_status qopt_hamiltonian_constant(int n_modes, const double* b, const double* c,
                                      qopt_hamiltonian** out) {
  QOPT_REQUIRE(b, "hamiltonian_constant");
  QOPT_REQUIRE(out, "hamiltonian_constant");
  return guard("hamiltonian_constant", [&] {
    if (n_modes < 1) {
      raise(ErrorCode::invalid_argument, "dynamics", "QuadraticHamiltonian", "n_modes must be >= 1");
    }
    const int d = 2 * n_modes;
    VectorXd cv = VectorXd::Zero(d);
    if (c != nullptr) cv = Eigen::Map<const VectorXd>(c, d);
    *out = new qopt_hamiltonian{
        dynamics::QuadraticHamiltonian::constant(read_row_major(b, d, d), cv)};
  });
}

qopt_status qopt_hamiltonian_n_modes(const qopt_hamiltonian* h, int* out) {
  QOPT_REQUIRE(h, "hamiltonian_n_modes");
  QOPT_REQUIRE(out, "hamiltonian_n_modes");
  *out = h->h.n_modes();
  return QOPT_OK;
}

void qopt_hamiltonian_free(qopt_hamiltonian* h) { delete h; }

qopt_status qopt_flow_integrate(const qopt_hamiltonian* h, double t_end, double tol,
                                int n_intervals, qopt_flow** out) {
  QOPT_REQUIRE(h, "flow_integrate");
  QOPT_REQUIRE(out, "flow_integrate");
  return guard("flow_integrate", [&] {
    *out = new qopt_flow{dynamics::integrate_symplectic_flow(h->h, t_end, tol, n_intervals)};
  });
}

qopt_status qopt_flow_size(const qopt_flow* f, size_t* out) {
  QOPT_REQUIRE(f, "flow_size");
  QOPT_REQUIRE(out, "flow_size");
  *out = f->flow.samples().size();
  return QOPT_OK;
}

qopt_status qopt_flow_sample(const qopt_flow* f, size_t i, double* t, double* lambda,
                             double* delta) {
  QOPT_REQUIRE(f, "flow_sample");
  return guard("flow_sample", [&] {
    check_index(i, f->flow.samples().size(), "flow_sample");
    const auto& s = f->flow.samples()[i];
    if (t != nullptr) *t = s.t;
    if (lambda != nullptr) copy_row_major(s.lambda, lambda);
    if (delta != nullptr) std::copy(s.delta.data(), s.delta.data() + s.delta.size(), delta);
  });
}

qopt_status qopt_flow_max_defect(const qopt_flow* f, double* out) {
  QOPT_REQUIRE(f, "flow_max_defect");
  QOPT_REQUIRE(out, "flow_max_defect");
  *out = f->flow.max_symplectic_defect();
  return QOPT_OK;
}

qopt_status qopt_flow_evolve(const qopt_flow* f, const qopt_gaussian* s, double t,
                             qopt_gaussian** out) {
  QOPT_REQUIRE(f, "flow_evolve");
  QOPT_REQUIRE(s, "flow_evolve");
  QOPT_REQUIRE(out, "flow_evolve");
  return guard("flow_evolve",
               [&] { *out = new qopt_gaussian{dynamics::evolve_gaussian(s->state, f->flow, t)}; });
}

void qopt_flow_free(qopt_flow* f) { delete f; }

qopt_status qopt_propagator_position(qopt_system_kind kind, double mass, double omega, double q,
                                     double qp, double t, qopt_complex* out) {
  QOPT_REQUIRE(out, "propagator_position");
  return guard("propagator_position", [&] {
    const dynamics::System sys{
        kind == QOPT_SYSTEM_OSCILLATOR ? dynamics::SystemKind::oscillator : dynamics::SystemKind::free,
        mass, omega};
    *out = from_cplx(dynamics::propagator_position(sys, q, qp, t));
  });
}

qopt_status qopt_propagator_coherent(qopt_complex alpha, qopt_complex beta, double omega, double t,
                                     qopt_complex* out) {
  QOPT_REQUIRE(out, "propagator_coherent");
  return guard("propagator_coherent", [&] {
    *out = from_cplx(dynamics::propagator_coherent(to_cplx(alpha), to_cplx(beta), omega, t));
  });
}

qopt_status qopt_propagator_fock(int n, int m, double omega, double t, qopt_complex* out) {
  QOPT_REQUIRE(out, "propagator_fock");
  return guard("propagator_fock",
               [&] { *out = from_cplx(dynamics::propagator_fock(n, m, omega, t)); });
}

qopt_status qopt_residual_check(qopt_system_kind kind, double mass, double omega, double t,
                                double* momentum_residual, double* position_residual) {
  return guard("residual_check", [&] {
    const dynamics::System sys{
        kind == QOPT_SYSTEM_OSCILLATOR ? dynamics::SystemKind::oscillator : dynamics::SystemKind::free,
        mass, omega};
    const auto r = dynamics::invariant_residual_check(sys, t);
    if (momentum_residual != nullptr) *momentum_residual = r.momentum_residual;
    if (position_residual != nullptr) *position_residual = r.position_residual;
  });
}

// ---- parametric

qopt_status qopt_profile_from_json(const char* json, qopt_profile** out) {
  QOPT_REQUIRE(json, "profile_from_json");
  QOPT_REQUIRE(out, "profile_from_json");
  return guard("profile_from_json", [&] {
    *out = new qopt_profile{serialization::profile_from_json(parse_json(json), "")};
  });
}

void qopt_profile_free(qopt_profile* p) { delete p; }

qopt_status qopt_epsilon_solve(const qopt_profile* p, double t_end, double tol, int n_intervals,
                               qopt_trajectory** out) {
  QOPT_REQUIRE(p, "epsilon_solve");
  QOPT_REQUIRE(out, "epsilon_solve");
  return guard("epsilon_solve", [&] {
    *out = new qopt_trajectory{parametric::solve_epsilon(p->profile, t_end, tol, n_intervals)};
  });
}

qopt_status qopt_trajectory_size(const qopt_trajectory* tr, size_t* out) {
  QOPT_REQUIRE(tr, "trajectory_size");
  QOPT_REQUIRE(out, "trajectory_size");
  *out = tr->traj.samples().size();
  return QOPT_OK;
}

namespace {
void write_point(const parametric::EpsilonPoint& pt, double* t, qopt_complex* eps,
                 qopt_complex* deps, double* phase) {
  if (t != nullptr) *t = pt.t;
  if (eps != nullptr) *eps = from_cplx(pt.eps);
  if (deps != nullptr) *deps = from_cplx(pt.deps);
  if (phase != nullptr) *phase = pt.phase;
}
}  // namespace

qopt_status qopt_trajectory_sample(const qopt_trajectory* tr, size_t i, double* t,
                                   qopt_complex* eps, qopt_complex* deps, double* phase) {
  QOPT_REQUIRE(tr, "trajectory_sample");
  return guard("trajectory_sample", [&] {
    check_index(i, tr->traj.samples().size(), "trajectory_sample");
    write_point(tr->traj.samples()[i], t, eps, deps, phase);
  });
}

qopt_status qopt_trajectory_at(const qopt_trajectory* tr, double t, qopt_complex* eps,
                               qopt_complex* deps, double* phase) {
  QOPT_REQUIRE(tr, "trajectory_at");
  return guard("trajectory_at", [&] { write_point(tr->traj.at(t), nullptr, eps, deps, phase); });
}

qopt_status qopt_trajectory_wronskian_defect(const qopt_trajectory* tr, double* out) {
  QOPT_REQUIRE(tr, "trajectory_wronskian_defect");
  QOPT_REQUIRE(out, "trajectory_wronskian_defect");
  *out = tr->traj.wronskian_defect();
  return QOPT_OK;
}

qopt_status qopt_trajectory_variances(const qopt_trajectory* tr, double t, double* sigma_x,
                                      double* sigma_p, double* r) {
  QOPT_REQUIRE(tr, "trajectory_variances");
  return guard("trajectory_variances", [&] {
    const auto v = parametric::variances_correlation(tr->traj, t);
    if (sigma_x != nullptr) *sigma_x = v.sigma_x;
    if (sigma_p != nullptr) *sigma_p = v.sigma_p;
    if (r != nullptr) *r = v.r;
  });
}

qopt_status qopt_squeezed_vacuum_pnd(const qopt_trajectory* tr, double t, int n, double* out) {
  QOPT_REQUIRE(tr, "squeezed_vacuum_pnd");
  QOPT_REQUIRE(out, "squeezed_vacuum_pnd");
  return guard("squeezed_vacuum_pnd",
               [&] { *out = parametric::squeezed_vacuum_pnd(tr->traj, t, n); });
}

qopt_status qopt_squeezed_vacuum_state(const qopt_trajectory* tr, double t, qopt_gaussian** out) {
  QOPT_REQUIRE(tr, "squeezed_vacuum_state");
  QOPT_REQUIRE(out, "squeezed_vacuum_state");
  return guard("squeezed_vacuum_state", [&] {
    *out = new qopt_gaussian{parametric::squeezed_vacuum_state(tr->traj.at(t))};
  });
}

void qopt_trajectory_free(qopt_trajectory* tr) { delete tr; }

// ---- cats

qopt_status qopt_cat_create(int n_modes, const qopt_complex* amplitudes, int odd, qopt_cat** out) {
  QOPT_REQUIRE(amplitudes, "cat_create");
  QOPT_REQUIRE(out, "cat_create");
  return guard("cat_create", [&] {
    if (n_modes < 1) raise(ErrorCode::invalid_argument, "cats", "CatState", "n_modes must be >= 1");
    *out = new qopt_cat{
        cats::CatState(cvector(amplitudes, n_modes), odd != 0 ? Parity::odd : Parity::even)};
  });
}

qopt_status qopt_cat_from_json(const char* json, qopt_cat** out) {
  QOPT_REQUIRE(json, "cat_from_json");
  QOPT_REQUIRE(out, "cat_from_json");
  return guard("cat_from_json",
               [&] { *out = new qopt_cat{serialization::cat_from_json(parse_json(json), "")}; });
}

void qopt_cat_free(qopt_cat* c) { delete c; }

qopt_status qopt_cat_n_modes(const qopt_cat* c, int* out) {
  QOPT_REQUIRE(c, "cat_n_modes");
  QOPT_REQUIRE(out, "cat_n_modes");
  *out = c->state.n_modes();
  return QOPT_OK;
}

qopt_status qopt_cat_normalization(const qopt_cat* c, double* out) {
  QOPT_REQUIRE(c, "cat_normalization");
  QOPT_REQUIRE(out, "cat_normalization");
  return guard("cat_normalization", [&] { *out = cats::cat_normalization(c->state); });
}

qopt_status qopt_cat_pnd(const qopt_cat* c, const int* n, double* out) {
  QOPT_REQUIRE(c, "cat_pnd");
  QOPT_REQUIRE(n, "cat_pnd");
  QOPT_REQUIRE(out, "cat_pnd");
  return guard("cat_pnd",
               [&] { *out = cats::cat_pnd(c->state, multi_index(n, c->state.n_modes())); });
}

qopt_status qopt_cat_distribution(const qopt_cat* c, double mass_target, int per_mode_cap,
                                  qopt_distribution** out) {
  QOPT_REQUIRE(c, "cat_distribution");
  QOPT_REQUIRE(out, "cat_distribution");
  return guard("cat_distribution", [&] {
    gaussian::PndOptions opts;
    opts.mass_target = mass_target;
    opts.per_mode_cap = per_mode_cap;
    *out = new qopt_distribution{c->state.n_modes(), cats::cat_distribution(c->state, opts)};
  });
}

qopt_status qopt_cat_moments(const qopt_cat* c, double* mean_n, double* covariance,
                             double* mandel_q) {
  QOPT_REQUIRE(c, "cat_moments");
  return guard("cat_moments", [&] {
    const auto m = cats::cat_moments(c->state);
    if (mean_n != nullptr) std::copy(m.mean_n.data(), m.mean_n.data() + m.mean_n.size(), mean_n);
    if (covariance != nullptr) copy_row_major(m.covariance, covariance);
    if (mandel_q != nullptr) {
      std::copy(m.mandel_q.data(), m.mandel_q.data() + m.mandel_q.size(), mandel_q);
    }
  });
}

qopt_status qopt_cat_q(const qopt_cat* c, const qopt_complex* beta, double* out) {
  QOPT_REQUIRE(c, "cat_q");
  QOPT_REQUIRE(beta, "cat_q");
  QOPT_REQUIRE(out, "cat_q");
  return guard("cat_q", [&] {
    const VectorXcd b = cvector(beta, c->state.n_modes());
    *out = cats::cat_q_eval(c->state,
                            std::span<const cplx>(b.data(), static_cast<std::size_t>(b.size())));
  });
}

qopt_status qopt_cat_wigner(const qopt_cat* c, const double* q, const double* p, double* out) {
  QOPT_REQUIRE(c, "cat_wigner");
  QOPT_REQUIRE(q, "cat_wigner");
  QOPT_REQUIRE(p, "cat_wigner");
  QOPT_REQUIRE(out, "cat_wigner");
  return guard("cat_wigner", [&] {
    const auto n = static_cast<std::size_t>(c->state.n_modes());
    *out = cats::cat_wigner_eval(c->state, std::span<const double>(q, n),
                                 std::span<const double>(p, n));
  });
}

qopt_status qopt_cat_wigner_grid(const qopt_cat* c, qopt_grid q, qopt_grid p,
                                 qopt_wigner_grid** out) {
  QOPT_REQUIRE(c, "cat_wigner_grid");
  QOPT_REQUIRE(out, "cat_wigner_grid");
  return guard("cat_wigner_grid", [&] {
    if (c->state.n_modes() != 1) {
      raise(ErrorCode::dimension_mismatch, "cats", "cat_wigner_eval",
            "phase-space grids need a single-mode cat");
    }
    const cats::CatState& st = c->state;
    auto w = [&st](double qq, double pp) {
      const double qa[] = {qq};
      const double pa[] = {pp};
      return cats::cat_wigner_eval(st, qa, pa);
    };
    *out = new qopt_wigner_grid{tomography::sample_wigner(w, to_grid(q), to_grid(p))};
  });
}

// ---- tomography

qopt_status qopt_wigner_grid_create(qopt_grid q, qopt_grid p, const double* values,
                                    qopt_wigner_grid** out) {
  QOPT_REQUIRE(values, "wigner_grid_create");
  QOPT_REQUIRE(out, "wigner_grid_create");
  return guard("wigner_grid_create", [&] {
    tomography::validate_grid(to_grid(q), "q");
    tomography::validate_grid(to_grid(p), "p");
    *out = new qopt_wigner_grid{{to_grid(q), to_grid(p), read_row_major(values, q.count, p.count)}};
  });
}

qopt_status qopt_wigner_grid_axes(const qopt_wigner_grid* w, qopt_grid* q, qopt_grid* p) {
  QOPT_REQUIRE(w, "wigner_grid_axes");
  if (q != nullptr) *q = from_grid(w->grid.q);
  if (p != nullptr) *p = from_grid(w->grid.p);
  return QOPT_OK;
}

qopt_status qopt_wigner_grid_values(const qopt_wigner_grid* w, double* values) {
  QOPT_REQUIRE(w, "wigner_grid_values");
  QOPT_REQUIRE(values, "wigner_grid_values");
  copy_row_major(w->grid.values, values);
  return QOPT_OK;
}

qopt_status qopt_wigner_grid_normalization(const qopt_wigner_grid* w, double* out) {
  QOPT_REQUIRE(w, "wigner_grid_normalization");
  QOPT_REQUIRE(out, "wigner_grid_normalization");
  *out = w->grid.normalization();
  return QOPT_OK;
}

void qopt_wigner_grid_free(qopt_wigner_grid* w) { delete w; }

qopt_status qopt_sinogram_from_gaussian(const qopt_gaussian* s, int n_angles, qopt_grid x,
                                        qopt_sinogram** out) {
  QOPT_REQUIRE(s, "sinogram_from_gaussian");
  QOPT_REQUIRE(out, "sinogram_from_gaussian");
  return guard("sinogram_from_gaussian", [&] {
    *out = new qopt_sinogram{
        tomography::gaussian_sinogram(s->state, uniform_angles(n_angles), to_grid(x))};
  });
}

qopt_status qopt_sinogram_from_cat(const qopt_cat* c, int n_angles, qopt_grid x, double v_max,
                                   int n_v, qopt_sinogram** out) {
  QOPT_REQUIRE(c, "sinogram_from_cat");
  QOPT_REQUIRE(out, "sinogram_from_cat");
  return guard("sinogram_from_cat", [&] {
    if (c->state.n_modes() != 1) {
      raise(ErrorCode::dimension_mismatch, "tomography", "forward_marginal_numeric",
            "tomography supports single-mode states only");
    }
    const cats::CatState& st = c->state;
    auto w = [&st](double qq, double pp) {
      const double qa[] = {qq};
      const double pa[] = {pp};
      return cats::cat_wigner_eval(st, qa, pa);
    };
    *out = new qopt_sinogram{
        tomography::forward_marginal_function(w, uniform_angles(n_angles), to_grid(x), v_max, n_v)};
  });
}

qopt_status qopt_sinogram_from_wigner_grid(const qopt_wigner_grid* w, int n_angles, qopt_grid x,
                                           qopt_sinogram** out) {
  QOPT_REQUIRE(w, "sinogram_from_wigner_grid");
  QOPT_REQUIRE(out, "sinogram_from_wigner_grid");
  return guard("sinogram_from_wigner_grid", [&] {
    *out = new qopt_sinogram{
        tomography::forward_marginal_numeric(w->grid, uniform_angles(n_angles), to_grid(x))};
  });
}

qopt_status qopt_sinogram_create(int n_angles, const double* theta, qopt_grid x,
                                 const double* values, qopt_sinogram** out) {
  QOPT_REQUIRE(theta, "sinogram_create");
  QOPT_REQUIRE(values, "sinogram_create");
  QOPT_REQUIRE(out, "sinogram_create");
  return guard("sinogram_create", [&] {
    tomography::validate_grid(to_grid(x), "x");
    if (n_angles < 1) {
      raise(ErrorCode::invalid_argument, "tomography", "sinogram", "n_angles must be >= 1");
    }
    tomography::Sinogram s;
    s.theta.assign(theta, theta + n_angles);
    s.x = to_grid(x);
    s.values = read_row_major(values, n_angles, x.count);
    for (int i = 0; i < n_angles; ++i) {
      double integral = 0.0;
      for (int j = 0; j < x.count; ++j) {
        const double w = (j == 0 || j == x.count - 1) ? 0.5 : 1.0;
        integral += w * s.values(i, j);
      }
      s.slice_defect.push_back(std::abs(integral * s.x.step() - 1.0));
    }
    *out = new qopt_sinogram{std::move(s)};
  });
}

qopt_status qopt_sinogram_shape(const qopt_sinogram* s, int* n_angles, qopt_grid* x) {
  QOPT_REQUIRE(s, "sinogram_shape");
  if (n_angles != nullptr) *n_angles = static_cast<int>(s->sino.theta.size());
  if (x != nullptr) *x = from_grid(s->sino.x);
  return QOPT_OK;
}

qopt_status qopt_sinogram_data(const qopt_sinogram* s, double* theta, double* values) {
  QOPT_REQUIRE(s, "sinogram_data");
  if (theta != nullptr) std::copy(s->sino.theta.begin(), s->sino.theta.end(), theta);
  if (values != nullptr) copy_row_major(s->sino.values, values);
  return QOPT_OK;
}

qopt_status qopt_sinogram_max_slice_defect(const qopt_sinogram* s, double* out) {
  QOPT_REQUIRE(s, "sinogram_max_slice_defect");
  QOPT_REQUIRE(out, "sinogram_max_slice_defect");
  *out = s->sino.max_slice_defect();
  return QOPT_OK;
}

void qopt_sinogram_free(qopt_sinogram* s) { delete s; }

qopt_status qopt_inverse_radon(const qopt_sinogram* s, qopt_grid q, qopt_grid p, double reg_s,
                               qopt_wigner_grid** out) {
  QOPT_REQUIRE(s, "inverse_radon");
  QOPT_REQUIRE(out, "inverse_radon");
  return guard("inverse_radon", [&] {
    *out = new qopt_wigner_grid{tomography::inverse_radon(s->sino, to_grid(q), to_grid(p), reg_s)};
  });
}

qopt_status qopt_symplectic_marginal(const qopt_wigner_grid* w, double mu, double nu, double delta,
                                     qopt_grid x, double* out) {
  QOPT_REQUIRE(w, "symplectic_marginal");
  QOPT_REQUIRE(out, "symplectic_marginal");
  return guard("symplectic_marginal", [&] {
    const auto v = tomography::symplectic_marginal(w->grid, mu, nu, delta, to_grid(x));
    std::copy(v.begin(), v.end(), out);
  });
}

qopt_status qopt_wigner_from_symplectic(const qopt_wigner_grid* w, int n_directions, qopt_grid x,
                                        qopt_grid q, qopt_grid p, double reg_s,
                                        qopt_wigner_grid** out) {
  QOPT_REQUIRE(w, "wigner_from_symplectic");
  QOPT_REQUIRE(out, "wigner_from_symplectic");
  return guard("wigner_from_symplectic", [&] {
    if (n_directions < 1) {
      raise(ErrorCode::invalid_argument, "tomography", "wigner_from_symplectic",
            "n_directions must be >= 1");
    }
    std::vector<double> mu;
    std::vector<double> nu;
    for (int k = 0; k < n_directions; ++k) {
      const double phi = k * kPi / n_directions;
      mu.push_back(std::cos(phi));
      nu.push_back(std::sin(phi));
    }
    const auto family = tomography::symplectic_family(w->grid, mu, nu, to_grid(x));
    *out = new qopt_wigner_grid{
        tomography::wigner_from_symplectic(family, to_grid(q), to_grid(p), reg_s)};
  });
}

}  // extern "C"

#include "qopt/verify.hpp"

#include <cmath>
#include <functional>
#include <string>

#include "qopt/cats.hpp"
#include "qopt/dynamics.hpp"
#include "qopt/errors.hpp"
#include "qopt/gaussian.hpp"
#include "qopt/hermite.hpp"
#include "qopt/parametric.hpp"
#include "qopt/tomography.hpp"

namespace qopt {

namespace {

using nlohmann::json;

double poisson_defect() {
  const cplx alpha(1.5, 0.0);
  const cplx a[] = {alpha};
  const auto s = gaussian::make_coherent(a);
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) {
    const double expect =
        std::exp(-std::norm(alpha) + n * std::log(std::norm(alpha)) - std::lgamma(n + 1.0));
    worst = std::max(worst, std::abs(gaussian::photon_pnd(s, hermite::MultiIndex{n}) - expect));
  }
  return worst;
}

double squeezed_cross_module_defect() {
  double worst = 0.0;
  const auto traj = parametric::solve_epsilon(
      parametric::FrequencyProfile::preset(parametric::ProfileKind::preset_free), 2.0, 1e-10);
  const auto p = traj.at(1.5);
  const auto state = parametric::squeezed_vacuum_state(p);
  for (int n = 0; n <= 30; ++n) {
    worst = std::max(worst, std::abs(parametric::squeezed_vacuum_pnd(p, n) -
                                     gaussian::photon_pnd(state, hermite::MultiIndex{n})));
  }
  return worst;
}

double flow_defect() {
  double worst = 0.0;
  for (const auto& h : {dynamics::QuadraticHamiltonian::oscillator(1.0, 1.0),
                        dynamics::QuadraticHamiltonian::free_particle(1.0)}) {
    worst = std::max(worst, dynamics::integrate_symplectic_flow(h, 20.0, 1e-9).max_symplectic_defect());
  }
  return worst;
}

double wronskian() {
  return parametric::solve_epsilon(parametric::FrequencyProfile::expression("1 + 0.5*sin(t)"), 20.0,
                                   1e-9)
      .wronskian_defect();
}

double propagator_residual() {
  double worst = 0.0;
  for (const auto kind : {dynamics::SystemKind::free, dynamics::SystemKind::oscillator}) {
    const auto r = dynamics::invariant_residual_check({kind, 1.0, 1.0}, 1.0);
    worst = std::max({worst, r.momentum_residual, r.position_residual});
  }
  return worst;
}

double hermite_block_defect() {
  MatrixXcd r = MatrixXcd::Zero(2, 2);
  r(0, 0) = cplx(1.3, 0.2);
  r(1, 1) = cplx(0.7, -0.1);
  VectorXcd y(2);
  y << cplx(0.4, 0.1), cplx(-0.3, 0.5);
  const hermite::HermiteParams both(r, y);
  const hermite::HermiteParams first(r.topLeftCorner(1, 1), y.head(1));
  const hermite::HermiteParams second(r.bottomRightCorner(1, 1), y.tail(1));
  double worst = 0.0;
  for (int a = 0; a <= 4; ++a) {
    for (int b = 0; b <= 4; ++b) {
      const cplx lhs = hermite::mv_hermite(both, {a, b});
      const cplx rhs = hermite::mv_hermite(first, {a}) * hermite::mv_hermite(second, {b});
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
    }
  }
  return worst;
}

double cat_mass_defect() {
  VectorXcd a(2);
  a << cplx(0.8, 0.1), cplx(-0.4, 0.5);
  double worst = 0.0;
  for (const Parity parity : {Parity::even, Parity::odd}) {
    worst = std::max(worst, std::abs(1.0 - cats::cat_distribution(cats::CatState(a, parity)).mass));
  }
  return worst;
}

double uncertainty_violation() {
  const cplx a[] = {cplx(0.5, -0.2)};
  double worst = 0.0;
  for (const auto& s : {gaussian::make_vacuum(2), gaussian::make_coherent(a),
                        gaussian::make_thermal_oscillator(1.0, 1.0),
                        gaussian::make_squeezed_vacuum(0.7)}) {
    worst = std::max(worst, -gaussian::validate_state(s).min_uncertainty_eigenvalue);
  }
  return worst;
}

double thermal_limit_defect() {
  const auto s = gaussian::make_thermal_oscillator(0.01, 1.0);
  double worst = 0.0;
  for (double x = -3.0; x <= 3.0; x += 0.5) {
    for (double y = -3.0; y <= 3.0; y += 0.5) {
      const cplx beta[] = {cplx(x, y) / std::sqrt(2.0)};
      worst = std::max(worst, std::abs(gaussian::q_eval(s, beta) - std::exp(-(x * x + y * y) / 2.0)));
    }
  }
  return worst;
}

double evolution_defect() {
  const cplx alpha(0.9, 0.3);
  const cplx a[] = {alpha};
  const auto s = gaussian::make_coherent(a);
  const auto flow =
      dynamics::integrate_symplectic_flow(dynamics::QuadraticHamiltonian::oscillator(1.0, 1.0), 2.0 * kPi, 1e-11);
  double worst = 0.0;
  for (const auto& sample : flow.samples()) {
    const auto e = dynamics::evolve_gaussian(s, sample);
    const cplx at = alpha * std::exp(cplx(0.0, -sample.t));
    const cplx expect[] = {at};
    const auto ref = gaussian::make_coherent(expect);
    worst = std::max(worst, (e.mean() - ref.mean()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double tomography_vacuum_error() {
  const auto s = gaussian::make_vacuum(1);
  const tomography::UniformGrid x{-8.0, 8.0, 129};
  const tomography::UniformGrid q{-2.0, 2.0, 21};
  const auto sino = tomography::gaussian_sinogram(s, tomography::uniform_angles(64), x);
  const auto rec = tomography::inverse_radon(sino, q, q, 1e-2);
  double worst = 0.0;
  for (int i = 0; i < q.count; ++i) {
    for (int j = 0; j < q.count; ++j) {
      VectorXd v(2);
      v << q.at(j), q.at(i);
      worst = std::max(worst, std::abs(rec.values(i, j) - gaussian::wigner_eval(s, v)));
    }
  }
  return worst / 2.0;
}

}  // namespace

json run_verification() {
  struct Check {
    const char* name;
    std::function<double()> run;
    double tolerance;
  };
  const Check checks[] = {
      {"poisson_reduction", poisson_defect, 1e-10},
      {"squeezed_vacuum_cross_module", squeezed_cross_module_defect, 1e-9},
      {"symplectic_flow_defect", flow_defect, 1e-7},
      {"wronskian_defect", wronskian, 1e-7},
      {"propagator_invariant_residual", propagator_residual, 1e-4},
      {"hermite_block_factorization", hermite_block_defect, 1e-10},
      {"cat_pnd_normalization", cat_mass_defect, 1e-9},
      {"constructor_uncertainty", uncertainty_violation, 1e-12},
      {"thermal_zero_temperature_limit", thermal_limit_defect, 1e-6},
      {"coherent_evolution", evolution_defect, 1e-9},
      {"tomography_vacuum_round_trip", tomography_vacuum_error, 2e-2},
  };
  json out = {{"checks", json::array()}};
  bool all = true;
  for (const auto& c : checks) {
    json entry = {{"name", c.name}, {"tolerance", c.tolerance}};
    try {
      const double v = c.run();
      const bool ok = std::isfinite(v) && v <= c.tolerance;
      entry["value"] = v;
      entry["passed"] = ok;
      all = all && ok;
    } catch (const std::exception& e) {
      entry["value"] = nullptr;
      entry["passed"] = false;
      entry["error"] = e.what();
      all = false;
    }
    out["checks"].push_back(entry);
  }
  out["passed"] = all;
  return out;
}

}  // namespace qopt

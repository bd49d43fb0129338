#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qopt/errors.hpp"
#include "qopt/expression.hpp"
#include "qopt/gaussian.hpp"
#include "qopt/parametric.hpp"

using namespace qopt;
using namespace qopt::parametric;

namespace {

const cplx I(0.0, 1.0);

struct Exact {
  cplx eps;
  cplx deps;
};

Exact exact(const std::string& preset, double t) {
  if (preset == "free") return {1.0 + I * t, I};
  if (preset == "oscillator") return {std::exp(I * t), I * std::exp(I * t)};
  return {std::cosh(t) + I * std::sinh(t), std::sinh(t) + I * std::cosh(t)};
}

// Photon statistics of the squeezed vacuum with squeezing parameter r.
double squeezed_even_weight(double r, int m) {
  return std::pow(std::tanh(r) / 2.0, 2 * m) * oracle::factorial(2 * m) /
         (std::cosh(r) * std::pow(oracle::factorial(m), 2));
}

EpsilonPoint squeezed_point(double r) { return {0.0, std::exp(-r), I * std::exp(r), 0.0}; }

FrequencyProfile random_table(std::mt19937& rng, double t_end) {
  std::uniform_real_distribution<double> w2(0.5, 2.0);
  std::vector<std::pair<double, double>> rows;
  for (int k = 0; k <= 40; ++k) rows.emplace_back(t_end * k / 40.0, w2(rng));
  return FrequencyProfile::tabulated(rows);
}

double norm_squared(const std::function<cplx(double)>& psi, double half_width) {
  return oracle::integrate([&](double x) { return std::norm(psi(x)); }, -half_width, half_width,
                           1e-13);
}

}  // namespace

TEST_SUITE("parametric") {
  TEST_CASE("preset closed forms") {
    for (const std::string name : {"free", "oscillator", "repulsive"}) {
      const auto traj = solve_epsilon(FrequencyProfile::preset(name), 10.0, 1e-10);
      double err = 0.0;
      for (const auto& p : traj.samples()) {
        const Exact e = exact(name, p.t);
        err = std::max({err, std::abs(p.eps - e.eps), std::abs(p.deps - e.deps)});
      }
      CHECK(err <= 1e-9);
      // Closed forms are exact; what remains is cancellation in eps deps* - eps* deps.
      const double scale = std::norm(traj.samples().back().eps) + std::norm(traj.samples().back().deps);
      CHECK(traj.wronskian_defect() <= 1e-15 * std::max(1.0, scale));
    }
  }

  TEST_CASE("numeric integration reproduces constant-frequency solutions") {
    for (const auto& [expr, name] : {std::pair{"0", "free"}, std::pair{"1", "oscillator"},
                                     std::pair{"-1", "repulsive"}}) {
      const double t_end = std::string(name) == "repulsive" ? 5.0 : 10.0;
      const auto traj = solve_epsilon(FrequencyProfile::expression(expr), t_end, 1e-11);
      double err = 0.0;
      for (const auto& p : traj.samples()) {
        const Exact e = exact(name, p.t);
        err = std::max(err, std::abs(p.eps - e.eps) / std::abs(e.eps));
      }
      CHECK(err <= 1e-8);
    }
  }

  TEST_CASE("Wronskian conservation") {
    std::mt19937 rng(12);
    for (int trial = 0; trial < 3; ++trial) {
      const auto traj = solve_epsilon(random_table(rng, 20.0), 20.0, 1e-9);
      double defect = 0.0;
      for (const auto& p : traj.samples()) {
        defect = std::max(defect, std::abs(p.eps * std::conj(p.deps) - std::conj(p.eps) * p.deps + 2.0 * I));
      }
      CHECK(defect <= 100 * 1e-9);
      CHECK(traj.wronskian_defect() == doctest::Approx(defect).epsilon(1e-6));
    }
    const auto expr = solve_epsilon(FrequencyProfile::expression("1 + 0.5*sin(2*t)"), 20.0, 1e-9);
    CHECK(expr.wronskian_defect() <= 100 * 1e-9);
  }

  TEST_CASE("Schroedinger relation is saturated") {
    const auto traj = solve_epsilon(FrequencyProfile::expression("1 + 0.3*cos(3*t)"), 8.0, 1e-10);
    for (double t : {0.0, 1.3, 4.7, 8.0}) {
      const auto v = variances_correlation(traj, t);
      const EpsilonPoint p = traj.at(t);
      const double cross = 0.5 * (std::conj(p.eps) * p.deps).real();
      CHECK(std::abs(v.sigma_x * v.sigma_p - cross * cross - 0.25) <= 1e-8);
      CHECK(std::abs(v.sigma_x * v.sigma_p * (1.0 - v.r * v.r) - 0.25) <= 1e-8);
      if (cross != 0.0) CHECK((v.r > 0) == (cross > 0));
    }
  }

  TEST_CASE("squeezed-vacuum photon statistics") {
    for (double r : {0.5, 1.0, 2.0}) {
      const EpsilonPoint p = squeezed_point(r);
      const auto state = squeezed_vacuum_state(p);
      const auto direct = gaussian::make_squeezed_vacuum(r);
      for (int m = 0; m <= 15; ++m) {
        const double expect = squeezed_even_weight(r, m);
        CHECK(std::abs(squeezed_vacuum_pnd(p, 2 * m) - expect) <= 1e-9);
        CHECK(squeezed_vacuum_pnd(p, 2 * m + 1) == 0.0);
        CHECK(std::abs(gaussian::photon_pnd(state, {2 * m}) - expect) <= 1e-9);
        CHECK(std::abs(gaussian::photon_pnd(direct, {2 * m}) - expect) <= 1e-9);
      }
    }
    CHECK_THROWS_AS(squeezed_vacuum_pnd(squeezed_point(1.0), -1), Error);
  }

  TEST_CASE("cross-module agreement along trajectories") {
    std::mt19937 rng(3);
    const auto traj = solve_epsilon(random_table(rng, 6.0), 6.0, 1e-10);
    std::uniform_real_distribution<double> pick(0.0, 6.0);
    for (int k = 0; k < 10; ++k) {
      const EpsilonPoint p = traj.at(pick(rng));
      const auto state = squeezed_vacuum_state(p);
      const double p0 = 2.0 / std::sqrt(std::norm(p.eps) + std::norm(p.deps) + 2.0);
      CHECK(std::abs(gaussian::to_qrep(state).p0 - p0) <= 1e-9);
      for (int n = 0; n <= 12; ++n) {
        CHECK(std::abs(squeezed_vacuum_pnd(p, n) - gaussian::photon_pnd(state, {n})) <= 1e-9);
      }
      const MatrixXd& d = state.disp();
      CHECK(std::abs(d(1, 1) - 0.5 * std::norm(p.eps)) <= 1e-9);
      CHECK(std::abs(d(0, 0) - 0.5 * std::norm(p.deps)) <= 1e-9);
      CHECK(std::abs(d(0, 1) - 0.5 * (std::conj(p.eps) * p.deps).real()) <= 1e-9);
    }
  }

  TEST_CASE("wavefunctions are normalized") {
    const auto traj = solve_epsilon(FrequencyProfile::preset("oscillator"), 3.0, 1e-10);
    const auto squeeze = solve_epsilon(FrequencyProfile::expression("1 + 0.8*sin(t)"), 3.0, 1e-10);
    for (const auto* tr : {&traj, &squeeze}) {
      const EpsilonPoint p = tr->at(2.3);
      const double w = 12.0 * std::max(1.0, std::abs(p.eps));
      CHECK(norm_squared([&](double x) { return ground_wavefunction(p, x); }, w) ==
            doctest::Approx(1.0).epsilon(1e-9));
      CHECK(norm_squared([&](double x) { return packet_wavefunction(p, cplx(0.7, 0.4), x); }, w) ==
            doctest::Approx(1.0).epsilon(1e-9));
      for (int level : {1, 3, 6}) {
        CHECK(norm_squared([&](double x) { return squeezed_number_wavefunction(p, level, x); }, w) ==
              doctest::Approx(1.0).epsilon(1e-9));
      }
      for (auto parity : {Parity::even, Parity::odd}) {
        CHECK(norm_squared([&](double x) { return parametric_cat_wavefunction(p, cplx(1.2, -0.5), parity, x); },
                           w) == doctest::Approx(1.0).epsilon(1e-9));
      }
    }
  }

  TEST_CASE("number states are orthogonal") {
    const auto traj = solve_epsilon(FrequencyProfile::expression("1 + 0.8*sin(t)"), 2.0, 1e-10);
    const EpsilonPoint p = traj.at(2.0);
    auto overlap = [&](int a, int b, bool imag) {
      return oracle::integrate(
          [&](double x) {
            const cplx v = std::conj(squeezed_number_wavefunction(p, a, x)) * squeezed_number_wavefunction(p, b, x);
            return imag ? v.imag() : v.real();
          },
          -20.0, 20.0, 1e-13);
    };
    CHECK(std::abs(overlap(1, 3, false)) < 1e-9);
    CHECK(std::abs(overlap(0, 2, true)) < 1e-9);
  }

  TEST_CASE("integral of motion") {
    const auto traj = solve_epsilon(FrequencyProfile::expression("1 + 0.5*cos(2*t)"), 4.0, 1e-11);
    const EpsilonPoint p = traj.at(3.1);
    const cplx alpha(0.5, -0.9);
    for (double x : {-1.0, 0.2, 1.5}) {
      const cplx g = apply_integral_of_motion(p, [&](double y) { return ground_wavefunction(p, y); }, x);
      CHECK(std::abs(g) < 1e-7);
      const cplx a = apply_integral_of_motion(p, [&](double y) { return packet_wavefunction(p, alpha, y); }, x);
      CHECK(std::abs(a - alpha * packet_wavefunction(p, alpha, x)) < 1e-7);
      const cplx n = apply_integral_of_motion(p, [&](double y) { return squeezed_number_wavefunction(p, 4, y); }, x);
      CHECK(std::abs(n - 2.0 * squeezed_number_wavefunction(p, 3, x)) < 1e-7);
    }
  }

  TEST_CASE("expressions") {
    CHECK(Expression("2^3")(0.0) == 8.0);
    CHECK(Expression("-t^2")(3.0) == -9.0);
    CHECK(Expression("1 + 2*3 - 4/2")(0.0) == 5.0);
    CHECK(Expression("sin(pi/2) + cos(0) + exp(0) + log(e)")(0.0) == doctest::Approx(4.0));
    CHECK(Expression("sqrt(abs(t)) * tanh(0) + cosh(0) - sinh(0) + tan(0)")(-4.0) == 1.0);
    CHECK(Expression(" ( t + 1 ) * ( t - 1 ) ")(3.0) == 8.0);
    for (const char* bad : {"", "sin(", "1 +", "foo(t)", "t t", "2 * )", "x"}) {
      CHECK_THROWS_AS(Expression{bad}, Error);
      try {
        Expression e(bad);
      } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::parse_error);
      }
    }
  }

  TEST_CASE("profile validation") {
    CHECK_THROWS_AS(FrequencyProfile::preset("quartic"), Error);
    CHECK_THROWS_AS(FrequencyProfile::tabulated({{0.0, 1.0}}), Error);
    CHECK_THROWS_AS(FrequencyProfile::tabulated({{0.0, 1.0}, {0.0, 2.0}}), Error);
    CHECK_THROWS_AS(FrequencyProfile::tabulated({{0.0, 1.0}, {1.0, std::nan("")}}), Error);
    const auto table = FrequencyProfile::tabulated({{0.0, 1.0}, {2.0, 3.0}});
    CHECK(table.omega_squared(1.0) == doctest::Approx(2.0));
    CHECK(table.t_max() == 2.0);
    try {
      (void)solve_epsilon(table, 3.0, 1e-9);
      FAIL("expected out_of_range");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::out_of_range);
    }
    CHECK_THROWS_AS(solve_epsilon(table, 1.0, 0.0), Error);
    CHECK_THROWS_AS(solve_epsilon(table, 1.0, 1e-9).at(1.5), Error);
  }
}

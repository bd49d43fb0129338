#include <algorithm>
#include <cmath>
#include <string>

#include "qopt/dynamics.hpp"
#include "qopt/errors.hpp"

namespace qopt::dynamics {

namespace {

constexpr std::string_view kModule = "dynamics";
constexpr double kCausticGuard = 1e-8;
const cplx kI{0.0, 1.0};

void check_system(const System& sys, double t, std::string_view op) {
  if (!(t > 0.0) || !std::isfinite(t)) {
    raise(ErrorCode::invalid_argument, kModule, op, "t must be positive");
  }
  if (!(sys.mass > 0.0)) raise(ErrorCode::invalid_argument, kModule, op, "mass must be positive");
  if (sys.kind == SystemKind::oscillator) {
    if (!(sys.omega > 0.0)) {
      raise(ErrorCode::invalid_argument, kModule, op, "omega must be positive");
    }
    const double s = std::sin(sys.omega * t);
    if (std::abs(s) < kCausticGuard) {
      raise(ErrorCode::caustic, kModule, op,
            "omega*t=" + std::to_string(sys.omega * t) + " lies on a caustic");
    }
  }
}

// Rows of the invariant map (p0, q0) = Lambda (p, q).
Eigen::Matrix2d invariant_matrix(const System& sys, double t) {
  Eigen::Matrix2d lam;
  if (sys.kind == SystemKind::free) {
    lam << 1.0, 0.0, -t / sys.mass, 1.0;
  } else {
    const double w = sys.omega;
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    lam << c, sys.mass * w * s, -s / (sys.mass * w), c;
  }
  return lam;
}

}  // namespace

cplx propagator_position(const System& sys, cplx q, cplx qp, double t) {
  check_system(sys, t, "propagator_position");
  const cplx root_minus_i = std::exp(-kI * (kPi / 4.0));
  if (sys.kind == SystemKind::free) {
    const cplx x = q - qp;
    return std::sqrt(sys.mass / (2.0 * kPi * t)) * root_minus_i *
           std::exp(kI * sys.mass * x * x / (2.0 * t));
  }
  const double wt = sys.omega * t;
  const double s = std::sin(wt);
  const double c = std::cos(wt);
  const double branches = std::floor(wt / kPi);
  const cplx maslov = std::exp(-kI * (kPi / 2.0) * branches);
  const cplx prefactor =
      std::sqrt(sys.mass * sys.omega / (2.0 * kPi * std::abs(s))) * root_minus_i * maslov;
  const cplx phase = kI * sys.mass * sys.omega / (2.0 * s) * ((q * q + qp * qp) * c - 2.0 * q * qp);
  return prefactor * std::exp(phase);
}

cplx propagator_position(const System& sys, double q, double qp, double t) {
  return propagator_position(sys, cplx(q), cplx(qp), t);
}

cplx propagator_coherent(cplx alpha, cplx beta, double omega, double t) {
  if (!(t >= 0.0)) {
    raise(ErrorCode::invalid_argument, kModule, "propagator_basis", "t must be >= 0");
  }
  const cplx rot = std::exp(-kI * omega * t);
  return std::exp(-kI * omega * t / 2.0) *
         std::exp(-0.5 * std::norm(alpha) - 0.5 * std::norm(beta) + std::conj(alpha) * beta * rot);
}

cplx propagator_fock(int n, int m, double omega, double t) {
  if (n < 0 || m < 0) {
    raise(ErrorCode::invalid_argument, kModule, "propagator_basis",
          "number-state indices must be >= 0");
  }
  if (!(t >= 0.0)) {
    raise(ErrorCode::invalid_argument, kModule, "propagator_basis", "t must be >= 0");
  }
  if (n != m) return cplx(0.0);
  return std::exp(-kI * omega * t * (n + 0.5));
}

ResidualReport invariant_residual_check(const System& sys, double t, int grid, double h) {
  check_system(sys, t, "invariant_residual_check");
  if (grid < 2 || !(h > 0.0)) {
    raise(ErrorCode::invalid_argument, kModule, "invariant_residual_check",
          "grid must be >= 2 and h > 0");
  }
  const Eigen::Matrix2d lam = invariant_matrix(sys, t);
  ResidualReport report;
  for (int a = 0; a < grid; ++a) {
    const double q = -1.0 + 2.0 * a / (grid - 1);
    for (int b = 0; b < grid; ++b) {
      const double qp = -1.0 + 2.0 * b / (grid - 1);
      const cplx g = propagator_position(sys, q, qp, t);
      const cplx dq = (propagator_position(sys, q + h, qp, t) -
                       propagator_position(sys, q - h, qp, t)) / (2.0 * h);
      const cplx dqp = (propagator_position(sys, q, qp + h, t) -
                        propagator_position(sys, q, qp - h, t)) / (2.0 * h);
      // p acts on the q argument as -i d/dq.
      const cplx p_g = -kI * dq;
      const cplx p0_g = lam(0, 0) * p_g + lam(0, 1) * q * g;
      const cplx q0_g = lam(1, 0) * p_g + lam(1, 1) * q * g;
      const double scale = std::abs(g);
      report.momentum_residual =
          std::max(report.momentum_residual, std::abs(p0_g - kI * dqp) / scale);
      report.position_residual =
          std::max(report.position_residual, std::abs(q0_g - qp * g) / scale);
    }
  }
  return report;
}

}  // namespace qopt::dynamics

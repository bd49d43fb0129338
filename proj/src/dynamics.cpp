#include "qopt/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "detail/ode.hpp"
#include "qopt/errors.hpp"

namespace qopt::dynamics {

namespace {

constexpr std::string_view kModule = "dynamics";

using RealState = std::vector<double>;
using ComplexState = std::vector<cplx>;

std::vector<double> uniform_times(double t0, double t1, int n_intervals) {
  std::vector<double> times(static_cast<std::size_t>(n_intervals) + 1);
  for (int k = 0; k <= n_intervals; ++k) {
    times[static_cast<std::size_t>(k)] = t0 + (t1 - t0) * k / n_intervals;
  }
  times.back() = t1;
  return times;
}

void check_flow_args(double t_end, double tol, int n_intervals, std::string_view op) {
  if (!(tol > 0.0)) raise(ErrorCode::invalid_argument, kModule, op, "tol must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    raise(ErrorCode::invalid_argument, kModule, op, "t_end must be finite and >= 0");
  }
  if (n_intervals < 1) {
    raise(ErrorCode::invalid_argument, kModule, op, "n_intervals must be >= 1");
  }
}

RealState pack(const MatrixXd& lambda, const VectorXd& delta) {
  RealState x(static_cast<std::size_t>(lambda.size() + delta.size()));
  Eigen::Map<MatrixXd>(x.data(), lambda.rows(), lambda.cols()) = lambda;
  Eigen::Map<VectorXd>(x.data() + lambda.size(), delta.size()) = delta;
  return x;
}

FlowSample unpack(const RealState& x, Eigen::Index dim, double t) {
  FlowSample s;
  s.t = t;
  s.lambda = Eigen::Map<const MatrixXd>(x.data(), dim, dim);
  s.delta = Eigen::Map<const VectorXd>(x.data() + dim * dim, dim);
  return s;
}

std::vector<FlowSample> run_real_flow(const QuadraticHamiltonian& h, const FlowSample& start,
                                      const std::vector<double>& times, double tol,
                                      std::string_view op) {
  const Eigen::Index dim = 2 * h.n_modes();
  const MatrixXd sigma = linalg::symplectic_metric(h.n_modes());
  auto rhs = [&](const RealState& x, RealState& dx, double t) {
    dx.resize(x.size());
    Eigen::Map<const MatrixXd> lambda(x.data(), dim, dim);
    const MatrixXd ls = lambda * sigma;
    Eigen::Map<MatrixXd>(dx.data(), dim, dim) = ls * h.b(t);
    Eigen::Map<VectorXd>(dx.data() + dim * dim, dim) = ls * h.c(t);
  };
  const auto states = detail::integrate_at_times(rhs, pack(start.lambda, start.delta), times,
                                                 tol, kModule, op);
  std::vector<FlowSample> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    out.push_back(unpack(states[k], dim, times[k]));
  }
  return out;
}

}  // namespace

QuadraticHamiltonian::QuadraticHamiltonian(int n_modes, MatrixFn b, VectorFn c,
                                           bool time_independent)
    : n_modes_(n_modes), b_(std::move(b)), c_(std::move(c)), time_independent_(time_independent) {
  if (n_modes < 1) {
    raise(ErrorCode::invalid_argument, kModule, "QuadraticHamiltonian", "n_modes < 1");
  }
  if (!b_) raise(ErrorCode::invalid_argument, kModule, "QuadraticHamiltonian", "missing B(t)");
  if (!c_) {
    c_ = [dim = 2 * n_modes](double) { return VectorXd::Zero(dim).eval(); };
  }
}

QuadraticHamiltonian QuadraticHamiltonian::constant(MatrixXd b, VectorXd c) {
  const Eigen::Index dim = b.rows();
  if (dim < 2 || dim % 2 != 0 || b.cols() != dim) {
    raise(ErrorCode::dimension_mismatch, kModule, "QuadraticHamiltonian",
          "B must be 2N x 2N");
  }
  if (c.size() == 0) c = VectorXd::Zero(dim);
  if (c.size() != dim) {
    raise(ErrorCode::dimension_mismatch, kModule, "QuadraticHamiltonian",
          "C must have length 2N");
  }
  QuadraticHamiltonian h(
      static_cast<int>(dim / 2), [b = std::move(b)](double) { return b; },
      [c = std::move(c)](double) { return c; }, true);
  (void)h.b(0.0);
  (void)h.c(0.0);
  return h;
}

QuadraticHamiltonian QuadraticHamiltonian::free_particle(double mass, double force) {
  if (!(mass > 0.0)) {
    raise(ErrorCode::invalid_argument, kModule, "free_particle", "mass must be positive");
  }
  MatrixXd b = MatrixXd::Zero(2, 2);
  b(0, 0) = 1.0 / mass;
  VectorXd c(2);
  c << 0.0, -force;
  return constant(b, c);
}

QuadraticHamiltonian QuadraticHamiltonian::oscillator(double mass, double omega,
                                                      double force) {
  if (!(mass > 0.0)) {
    raise(ErrorCode::invalid_argument, kModule, "oscillator", "mass must be positive");
  }
  MatrixXd b = MatrixXd::Zero(2, 2);
  b(0, 0) = 1.0 / mass;
  b(1, 1) = mass * omega * omega;
  VectorXd c(2);
  c << 0.0, -force;
  return constant(b, c);
}

QuadraticHamiltonian QuadraticHamiltonian::parametric(
    std::function<double(double)> omega_squared) {
  if (!omega_squared) {
    raise(ErrorCode::invalid_argument, kModule, "parametric", "missing omega^2(t)");
  }
  return QuadraticHamiltonian(
      1,
      [w2 = std::move(omega_squared)](double t) {
        MatrixXd b = MatrixXd::Zero(2, 2);
        b(0, 0) = 1.0;
        b(1, 1) = w2(t);
        return b;
      },
      nullptr, false);
}

MatrixXd QuadraticHamiltonian::b(double t) const {
  MatrixXd m = b_(t);
  const Eigen::Index dim = 2 * n_modes_;
  if (m.rows() != dim || m.cols() != dim) {
    raise(ErrorCode::dimension_mismatch, kModule, "hamiltonian", "B(t) must be 2N x 2N");
  }
  if (!m.allFinite()) {
    raise(ErrorCode::invalid_argument, kModule, "hamiltonian",
          "B(t) is not finite at t=" + std::to_string(t));
  }
  if (linalg::asymmetry(m) > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) {
    raise(ErrorCode::invalid_argument, kModule, "hamiltonian",
          "B(t) is not symmetric at t=" + std::to_string(t));
  }
  return m;
}

VectorXd QuadraticHamiltonian::c(double t) const {
  VectorXd v = c_(t);
  if (v.size() != 2 * n_modes_) {
    raise(ErrorCode::dimension_mismatch, kModule, "hamiltonian", "C(t) must have length 2N");
  }
  return v;
}

double symplectic_defect(const MatrixXd& lambda) {
  const int n = static_cast<int>(lambda.rows() / 2);
  const MatrixXd sigma = linalg::symplectic_metric(n);
  const MatrixXd d = lambda * sigma * lambda.transpose() - sigma;
  return d.cwiseAbs().rowwise().sum().maxCoeff();
}

double SymplecticFlow::max_symplectic_defect() const {
  double worst = 0.0;
  for (const auto& s : samples_) worst = std::max(worst, symplectic_defect(s.lambda));
  return worst;
}

FlowSample SymplecticFlow::at(double t) const {
  if (!(t >= 0.0) || t > t_end()) {
    raise(ErrorCode::out_of_range, kModule, "flow_at",
          "t=" + std::to_string(t) + " outside [0, " + std::to_string(t_end()) + "]");
  }
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const FlowSample& s) { return v < s.t; });
  const FlowSample& start = *std::prev(it);
  if (start.t == t) return start;
  return run_real_flow(h_, start, {start.t, t}, tol_, "flow_at").back();
}

SymplecticFlow integrate_symplectic_flow(const QuadraticHamiltonian& h, double t_end,
                                         double tol, int n_intervals) {
  check_flow_args(t_end, tol, n_intervals, "integrate_symplectic_flow");
  const Eigen::Index dim = 2 * h.n_modes();
  SymplecticFlow flow(h, tol);
  FlowSample start{0.0, MatrixXd::Identity(dim, dim), VectorXd::Zero(dim)};
  if (t_end == 0.0) {
    flow.samples_.push_back(start);
    return flow;
  }
  flow.samples_ = run_real_flow(h, start, uniform_times(0.0, t_end, n_intervals), tol,
                                "integrate_symplectic_flow");
  return flow;
}

FlowSample flow_expm(const QuadraticHamiltonian& h, double t) {
  if (!h.time_independent()) {
    raise(ErrorCode::invalid_argument, kModule, "flow_expm",
          "Hamiltonian must be time-independent");
  }
  const int n = h.n_modes();
  const Eigen::Index dim = 2 * n;
  const MatrixXd sigma = linalg::symplectic_metric(n);
  MatrixXd aug = MatrixXd::Zero(dim + 1, dim + 1);
  aug.topLeftCorner(dim, dim) = sigma * h.b(0.0);
  aug.topRightCorner(dim, 1) = sigma * h.c(0.0);
  const MatrixXd e = (t * aug).exp();
  return FlowSample{t, e.topLeftCorner(dim, dim), e.topRightCorner(dim, 1)};
}

LadderHamiltonian LadderHamiltonian::from_quadrature(const QuadraticHamiltonian& h) {
  const MatrixXcd u = linalg::quadrature_unitary(h.n_modes());
  LadderHamiltonian out;
  out.n_modes = h.n_modes();
  out.d = [h, u](double t) -> MatrixXcd { return u.transpose() * h.b(t).cast<cplx>() * u; };
  out.e = [h, u](double t) -> VectorXcd { return u.transpose() * h.c(t).cast<cplx>(); };
  return out;
}

ComplexFlow integrate_complex_flow(const LadderHamiltonian& h, double t_end, double tol,
                                   int n_intervals) {
  constexpr std::string_view op = "integrate_complex_flow";
  check_flow_args(t_end, tol, n_intervals, op);
  if (h.n_modes < 1 || !h.d) {
    raise(ErrorCode::invalid_argument, kModule, op, "incomplete ladder Hamiltonian");
  }
  const int n = h.n_modes;
  const Eigen::Index dim = 2 * n;
  MatrixXcd sigma = MatrixXcd::Zero(dim, dim);
  sigma.topRightCorner(n, n) = cplx(0.0, 1.0) * MatrixXcd::Identity(n, n);
  sigma.bottomLeftCorner(n, n) = cplx(0.0, -1.0) * MatrixXcd::Identity(n, n);

  auto rhs = [&](const ComplexState& x, ComplexState& dx, double t) {
    dx.resize(x.size());
    const MatrixXcd d = h.d(t);
    if (d.rows() != dim || d.cols() != dim) {
      raise(ErrorCode::dimension_mismatch, kModule, op, "D(t) must be 2N x 2N");
    }
    const VectorXcd e = h.e ? h.e(t) : VectorXcd::Zero(dim).eval();
    Eigen::Map<const MatrixXcd> m(x.data(), dim, dim);
    const MatrixXcd ms = m * sigma;
    Eigen::Map<MatrixXcd>(dx.data(), dim, dim) = ms * d;
    Eigen::Map<VectorXcd>(dx.data() + dim * dim, dim) = ms * e;
  };

  ComplexState x0(static_cast<std::size_t>(dim * dim + dim), cplx(0.0));
  Eigen::Map<MatrixXcd>(x0.data(), dim, dim).setIdentity();
  ComplexFlow flow;
  flow.tolerance = tol;
  const std::vector<double> times =
      t_end == 0.0 ? std::vector<double>{0.0} : uniform_times(0.0, t_end, n_intervals);
  const auto states = detail::integrate_at_times(rhs, x0, times, tol, kModule, op);
  for (std::size_t k = 0; k < states.size(); ++k) {
    flow.samples.push_back(ComplexFlowSample{
        times[k], Eigen::Map<const MatrixXcd>(states[k].data(), dim, dim),
        Eigen::Map<const VectorXcd>(states[k].data() + dim * dim, dim)});
  }
  return flow;
}

gaussian::GaussianState evolve_gaussian(const gaussian::GaussianState& s,
                                        const FlowSample& sample) {
  if (sample.lambda.rows() != s.mean().size()) {
    raise(ErrorCode::dimension_mismatch, kModule, "evolve_gaussian",
          "flow and state mode counts differ");
  }
  const auto lu = sample.lambda.partialPivLu();
  const MatrixXd inv = lu.inverse();
  const MatrixXd disp = inv * s.disp() * inv.transpose();
  return gaussian::GaussianState(lu.solve(s.mean() - sample.delta),
                                 0.5 * (disp + disp.transpose()));
}

gaussian::GaussianState evolve_gaussian(const gaussian::GaussianState& s,
                                        const SymplecticFlow& flow, double t) {
  return evolve_gaussian(s, flow.at(t));
}

}  // namespace qopt::dynamics

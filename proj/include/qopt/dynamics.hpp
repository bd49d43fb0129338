#pragma once

#include <functional>
#include <vector>

#include "qopt/gaussian.hpp"
#include "qopt/linalg.hpp"

namespace qopt::dynamics {

using MatrixFn = std::function<MatrixXd(double)>;
using VectorFn = std::function<VectorXd(double)>;

/// H = Q B(t) Q / 2 + C(t) Q in quadrature ordering (p_1..p_N, q_1..q_N).
class QuadraticHamiltonian {
 public:
  QuadraticHamiltonian(int n_modes, MatrixFn b, VectorFn c, bool time_independent);

  static QuadraticHamiltonian constant(MatrixXd b, VectorXd c);
  static QuadraticHamiltonian free_particle(double mass, double force = 0.0);
  static QuadraticHamiltonian oscillator(double mass, double omega, double force = 0.0);
  /// Unit-mass oscillator with frequency omega^2(t).
  static QuadraticHamiltonian parametric(std::function<double(double)> omega_squared);

  int n_modes() const { return n_modes_; }
  bool time_independent() const { return time_independent_; }
  /// Evaluates B(t); throws invalid_argument if it is not symmetric or finite.
  MatrixXd b(double t) const;
  VectorXd c(double t) const;

 private:
  int n_modes_;
  MatrixFn b_;
  VectorFn c_;
  bool time_independent_;
};

struct FlowSample {
  double t = 0.0;
  MatrixXd lambda;
  VectorXd delta;
};

/// Linear integrals of motion Lambda(t) Q + Delta(t), sampled on [0, t_end].
class SymplecticFlow {
 public:
  const std::vector<FlowSample>& samples() const { return samples_; }
  double t_end() const { return samples_.back().t; }
  double tolerance() const { return tol_; }
  /// Largest ||Lambda Sigma Lambda^T - Sigma||_inf over the samples.
  double max_symplectic_defect() const;
  /// Value at arbitrary t in [0, t_end]; integrates forward from the nearest
  /// earlier sample.
  FlowSample at(double t) const;

 private:
  friend SymplecticFlow integrate_symplectic_flow(const QuadraticHamiltonian&, double,
                                                  double, int);
  SymplecticFlow(QuadraticHamiltonian h, double tol) : h_(std::move(h)), tol_(tol) {}
  QuadraticHamiltonian h_;
  double tol_;
  std::vector<FlowSample> samples_;
};

double symplectic_defect(const MatrixXd& lambda);

/// Integrates dLambda/dt = Lambda Sigma B, dDelta/dt = Lambda Sigma C from
/// (I, 0), recording n_intervals + 1 equally spaced samples.
SymplecticFlow integrate_symplectic_flow(const QuadraticHamiltonian& h, double t_end,
                                         double tol, int n_intervals = 200);

/// Closed form for a time-independent Hamiltonian via the matrix exponential
/// of [[Sigma B, Sigma C], [0, 0]].
FlowSample flow_expm(const QuadraticHamiltonian& h, double t);

/// H = B D(t) B / 2 + E(t) B with B = (a, a^dagger); D = U^T B U, E = U^T C.
struct LadderHamiltonian {
  int n_modes = 1;
  std::function<MatrixXcd(double)> d;
  std::function<VectorXcd(double)> e;

  static LadderHamiltonian from_quadrature(const QuadraticHamiltonian& h);
};

struct ComplexFlowSample {
  double t = 0.0;
  MatrixXcd m;
  VectorXcd n;
};

struct ComplexFlow {
  std::vector<ComplexFlowSample> samples;
  double tolerance = 0.0;
};

/// dM/dt = M sigma D, dN/dt = M sigma E with sigma = [[0, iI], [-iI, 0]].
ComplexFlow integrate_complex_flow(const LadderHamiltonian& h, double t_end, double tol,
                                   int n_intervals = 200);

/// State whose Wigner function is W0(Lambda Q + Delta).
gaussian::GaussianState evolve_gaussian(const gaussian::GaussianState& s,
                                        const FlowSample& sample);
gaussian::GaussianState evolve_gaussian(const gaussian::GaussianState& s,
                                        const SymplecticFlow& flow, double t);

// Propagators (hbar = 1).

enum class SystemKind { free, oscillator };

struct System {
  SystemKind kind = SystemKind::free;
  double mass = 1.0;
  double omega = 1.0;
};

/// Position-space propagator G(q, q', t). Arguments may be complex (analytic
/// continuation used for contour-rotated quadrature). The oscillator square
/// root carries the phase exp(-i pi/2 floor(omega t / pi)) past caustics.
cplx propagator_position(const System& sys, cplx q, cplx qp, double t);
cplx propagator_position(const System& sys, double q, double qp, double t);

/// Oscillator propagator between coherent states <alpha|U(t)|beta>.
cplx propagator_coherent(cplx alpha, cplx beta, double omega, double t);
/// Oscillator propagator between number states <n|U(t)|m>.
cplx propagator_fock(int n, int m, double omega, double t);

struct ResidualReport {
  double momentum_residual = 0.0;
  double position_residual = 0.0;
};

/// Applies the invariants p0(t), q0(t) to the q argument of G by central
/// finite differences (step h) on a grid x grid of (q, q') in [-1, 1]^2 and
/// returns the largest residuals relative to |G|.
ResidualReport invariant_residual_check(const System& sys, double t, int grid = 9,
                                        double h = 1e-3);

}  // namespace qopt::dynamics

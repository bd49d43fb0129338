#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qopt {

using cplx = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

enum class Parity { even, odd };

namespace linalg {

/// Symplectic metric for quadrature ordering (p_1..p_N, q_1..q_N):
/// [[0, I], [-I, 0]].
MatrixXd symplectic_metric(int n_modes);

/// [[0, I], [I, 0]].
MatrixXd sigma_x(int n_modes);

/// Maps B = (beta, beta*) to quadratures: (p, q) = U B.
MatrixXcd quadrature_unitary(int n_modes);

/// Largest |A - A^T| entry.
double asymmetry(const MatrixXcd& a);
double asymmetry(const MatrixXd& a);

/// Reciprocal condition number estimate in the 2-norm (0 for singular).
double rcond(const MatrixXcd& a);
double rcond(const MatrixXd& a);

/// (det m)^{-1/2} for a complex symmetric matrix whose real part is positive
/// definite. The branch is fixed by taking the principal root of each
/// eigenvalue, all of which lie in the right half-plane.
cplx inverse_sqrt_det(const MatrixXcd& m);

/// True when the real symmetric matrix is positive definite.
bool positive_definite(const MatrixXd& a);

}  // namespace linalg
}  // namespace qopt

#include "qopt/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qopt::linalg {

MatrixXd symplectic_metric(int n_modes) {
  MatrixXd s = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  s.topRightCorner(n_modes, n_modes).setIdentity();
  s.bottomLeftCorner(n_modes, n_modes) = -MatrixXd::Identity(n_modes, n_modes);
  return s;
}

MatrixXd sigma_x(int n_modes) {
  MatrixXd s = MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  s.topRightCorner(n_modes, n_modes).setIdentity();
  s.bottomLeftCorner(n_modes, n_modes).setIdentity();
  return s;
}

MatrixXcd quadrature_unitary(int n_modes) {
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i{0.0, 1.0};
  MatrixXcd u = MatrixXcd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    u(k, k) = -i * h;
    u(k, n_modes + k) = i * h;
    u(n_modes + k, k) = h;
    u(n_modes + k, n_modes + k) = h;
  }
  return u;
}

double asymmetry(const MatrixXcd& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

double asymmetry(const MatrixXd& a) {
  return (a - a.transpose()).cwiseAbs().maxCoeff();
}

double rcond(const MatrixXcd& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<MatrixXcd> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

double rcond(const MatrixXd& a) {
  if (a.size() == 0) return 1.0;
  Eigen::JacobiSVD<MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  if (s(0) == 0.0) return 0.0;
  return s(s.size() - 1) / s(0);
}

cplx inverse_sqrt_det(const MatrixXcd& m) {
  Eigen::ComplexEigenSolver<MatrixXcd> es(m, false);
  cplx result{1.0, 0.0};
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    result /= std::sqrt(es.eigenvalues()(k));
  }
  return result;
}

bool positive_definite(const MatrixXd& a) {
  if (a.size() == 0) return false;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (a + a.transpose()),
                                             Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) > 0.0;
}

}  // namespace qopt::linalg

#include "qopt/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "detail/compositions.hpp"
#include "qopt/errors.hpp"

namespace qopt::gaussian {

namespace {

constexpr std::string_view kModule = "gaussian";
constexpr double kSingularRcond = 1e-14;
constexpr double kNegativeClip = -1e-12;

double clipped_probability(double p, std::string_view op) {
  if (p < kNegativeClip) {
    raise(ErrorCode::internal, kModule, op,
          "negative photon probability " + std::to_string(p) +
              " (convention error)");
  }
  return std::max(0.0, p);
}

}  // namespace

GaussianState::GaussianState(VectorXd mean, MatrixXd disp)
    : n_modes_(static_cast<int>(mean.size() / 2)),
      mean_(std::move(mean)),
      disp_(std::move(disp)) {
  if (mean_.size() < 2 || mean_.size() % 2 != 0) {
    raise(ErrorCode::dimension_mismatch, kModule, "GaussianState",
          "mean must have even length 2N >= 2");
  }
  if (disp_.rows() != mean_.size() || disp_.cols() != mean_.size()) {
    raise(ErrorCode::dimension_mismatch, kModule, "GaussianState",
          "dispersion matrix must be 2N x 2N");
  }
  if (!mean_.allFinite() || !disp_.allFinite()) {
    raise(ErrorCode::invalid_argument, kModule, "GaussianState",
          "non-finite state entries");
  }
  const double scale = std::max(1.0, disp_.cwiseAbs().maxCoeff());
  if (linalg::asymmetry(disp_) > 1e-12 * scale) {
    raise(ErrorCode::invalid_argument, kModule, "GaussianState",
          "dispersion matrix is not symmetric");
  }
  disp_ = 0.5 * (disp_ + disp_.transpose());
}

GaussianState make_vacuum(int n_modes) {
  if (n_modes < 1) {
    raise(ErrorCode::invalid_argument, kModule, "make_vacuum", "n_modes < 1");
  }
  return GaussianState(VectorXd::Zero(2 * n_modes),
                       0.5 * MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState make_coherent(std::span<const cplx> alpha) {
  const auto n = static_cast<Eigen::Index>(alpha.size());
  if (n < 1) {
    raise(ErrorCode::invalid_argument, kModule, "make_coherent",
          "empty amplitude vector");
  }
  VectorXd mean(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    mean(k) = std::sqrt(2.0) * alpha[static_cast<std::size_t>(k)].imag();
    mean(n + k) = std::sqrt(2.0) * alpha[static_cast<std::size_t>(k)].real();
  }
  return GaussianState(std::move(mean), 0.5 * MatrixXd::Identity(2 * n, 2 * n));
}

GaussianState make_thermal_oscillator(double temperature, double omega) {
  if (!(temperature > 0.0) || !std::isfinite(temperature)) {
    raise(ErrorCode::invalid_argument, kModule, "make_thermal_oscillator",
          "temperature must be positive");
  }
  if (!(omega > 0.0)) {
    raise(ErrorCode::invalid_argument, kModule, "make_thermal_oscillator",
          "omega must be positive");
  }
  const double sigma = 0.5 / std::tanh(omega / (2.0 * temperature));
  return GaussianState(VectorXd::Zero(2), sigma * MatrixXd::Identity(2, 2));
}

GaussianState make_squeezed_vacuum(double r) {
  PureGaussianSpec spec{MatrixXcd::Constant(1, 1, 0.5 * std::exp(2.0 * r)),
                        VectorXcd::Zero(1)};
  return from_pure_gaussian(spec);
}

StateReport validate_state(const GaussianState& s) {
  StateReport report;
  const int n = s.n_modes();
  report.symmetry_defect = linalg::asymmetry(s.disp());
  const MatrixXcd h = s.disp().cast<cplx>() +
                      cplx(0.0, 0.5) * linalg::symplectic_metric(n).cast<cplx>();
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  report.min_uncertainty_eigenvalue = es.eigenvalues()(0);
  const double det = s.disp().determinant();
  if (det > 0.0) {
    const double mu = 1.0 / std::sqrt(std::pow(4.0, n) * det);
    report.purity = std::clamp(mu, 0.0, 1.0);
  }
  report.uncertainty_ok = report.min_uncertainty_eigenvalue >= -1e-10;
  return report;
}

double wigner_eval(const GaussianState& s, const VectorXd& quadratures) {
  if (quadratures.size() != s.mean().size()) {
    raise(ErrorCode::dimension_mismatch, kModule, "wigner_eval",
          "quadrature vector must have length 2N");
  }
  if (linalg::rcond(s.disp()) < kSingularRcond) {
    raise(ErrorCode::singular_matrix, kModule, "wigner_eval",
          "dispersion matrix is singular");
  }
  Eigen::LDLT<MatrixXd> ldlt(s.disp());
  const VectorXd d = quadratures - s.mean();
  const double quad = d.dot(ldlt.solve(d));
  return std::exp(-0.5 * quad) / std::sqrt(s.disp().determinant());
}

QRep to_qrep(const GaussianState& s) {
  const int n = s.n_modes();
  const Eigen::Index dim = 2 * n;
  const MatrixXd id = MatrixXd::Identity(dim, dim);
  const MatrixXd two_m_plus = 2.0 * s.disp() + id;
  if (linalg::rcond(two_m_plus) < kSingularRcond) {
    raise(ErrorCode::singular_matrix, kModule, "to_qrep", "I + 2M is singular");
  }
  const MatrixXd k = two_m_plus.inverse();
  const MatrixXcd u = linalg::quadrature_unitary(n);
  const VectorXd& mean = s.mean();

  QRep q;
  q.p0 = std::exp(-mean.dot(k * mean)) /
         std::sqrt((s.disp() + 0.5 * id).determinant());
  q.R = 2.0 * u.transpose() * k.cast<cplx>() * u -
        linalg::sigma_x(n).cast<cplx>();
  q.R = 0.5 * (q.R + q.R.transpose());
  q.ry = 2.0 * u.transpose() * (k * mean).cast<cplx>();
  const MatrixXd two_m_minus = id - 2.0 * s.disp();
  if (linalg::rcond(two_m_minus) >= 1e-12) {
    q.y = 2.0 * u.adjoint() * two_m_minus.partialPivLu().solve(mean).cast<cplx>();
  }
  return q;
}

GaussianState from_qrep(const QRep& q) {
  const Eigen::Index dim = q.R.rows();
  if (dim < 2 || dim % 2 != 0 || q.R.cols() != dim || q.ry.size() != dim) {
    raise(ErrorCode::dimension_mismatch, kModule, "from_qrep",
          "R must be 2N x 2N and Ry of length 2N");
  }
  const int n = static_cast<int>(dim / 2);
  const MatrixXcd shifted = q.R + linalg::sigma_x(n).cast<cplx>();
  if (linalg::rcond(shifted) < kSingularRcond) {
    raise(ErrorCode::singular_matrix, kModule, "from_qrep",
          "R + sigma_x is singular");
  }
  const MatrixXcd inv = shifted.inverse();
  const MatrixXcd u = linalg::quadrature_unitary(n);
  const MatrixXcd disp = u * inv * u.transpose() -
                         0.5 * MatrixXcd::Identity(dim, dim);
  const VectorXcd mean = u * inv * q.ry;
  const double scale = std::max(1.0, disp.cwiseAbs().maxCoeff());
  if (disp.imag().cwiseAbs().maxCoeff() > 1e-9 * scale ||
      mean.imag().cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, mean.cwiseAbs().maxCoeff())) {
    raise(ErrorCode::invalid_argument, kModule, "from_qrep",
          "Q-function parameters do not describe a real Gaussian state");
  }
  return GaussianState(mean.real(), disp.real());
}

double q_eval(const GaussianState& s, std::span<const cplx> beta) {
  const int n = s.n_modes();
  if (beta.size() != static_cast<std::size_t>(n)) {
    raise(ErrorCode::dimension_mismatch, kModule, "q_eval",
          "beta must have length N");
  }
  const QRep q = to_qrep(s);
  VectorXcd b(2 * n);
  for (int k = 0; k < n; ++k) {
    b(k) = beta[static_cast<std::size_t>(k)];
    b(n + k) = std::conj(beta[static_cast<std::size_t>(k)]);
  }
  const MatrixXcd shifted = q.R + linalg::sigma_x(n).cast<cplx>();
  const cplx exponent = -0.5 * (b.transpose() * shifted * b).value() +
                        (b.transpose() * q.ry).value();
  return q.p0 * std::exp(exponent).real();
}

GaussianState from_pure_gaussian(const PureGaussianSpec& spec) {
  constexpr std::string_view op = "from_pure_gaussian";
  const Eigen::Index n = spec.m.rows();
  if (n < 1 || spec.m.cols() != n || spec.c.size() != n) {
    raise(ErrorCode::dimension_mismatch, kModule, op,
          "m must be N x N and c of length N");
  }
  const double scale = std::max(1.0, spec.m.cwiseAbs().maxCoeff());
  if (linalg::asymmetry(spec.m) > 1e-12 * scale) {
    raise(ErrorCode::invalid_argument, kModule, op, "m is not symmetric");
  }
  const MatrixXcd m = 0.5 * (spec.m + spec.m.transpose());
  const MatrixXd a = m.real();
  const MatrixXd b = m.imag();
  if (!linalg::positive_definite(a)) {
    raise(ErrorCode::invalid_argument, kModule, op,
          "Re(m) is not positive definite; wavefunction is not normalizable");
  }
  const MatrixXd a_inv = a.inverse();
  MatrixXd disp(2 * n, 2 * n);
  disp.topLeftCorner(n, n) = a + b * a_inv * b;
  disp.bottomRightCorner(n, n) = 0.25 * a_inv;
  disp.topRightCorner(n, n) = -0.5 * b * a_inv;
  disp.bottomLeftCorner(n, n) = disp.topRightCorner(n, n).transpose();

  VectorXd mean(2 * n);
  const VectorXd q = 0.5 * a_inv * spec.c.real();
  mean.tail(n) = q;
  mean.head(n) = spec.c.imag() - 2.0 * b * q;
  return GaussianState(std::move(mean), 0.5 * (disp + disp.transpose()));
}

GaussianState reduced_state(const GaussianState& s, std::span<const int> modes) {
  const int n = s.n_modes();
  const auto k = static_cast<Eigen::Index>(modes.size());
  if (k < 1) {
    raise(ErrorCode::invalid_argument, kModule, "reduced_state", "no modes");
  }
  std::vector<Eigen::Index> rows;
  for (int j : modes) {
    if (j < 0 || j >= n) {
      raise(ErrorCode::out_of_range, kModule, "reduced_state",
            "mode index " + std::to_string(j) + " out of range");
    }
    rows.push_back(j);
  }
  for (int j : modes) rows.push_back(n + j);
  VectorXd mean(2 * k);
  MatrixXd disp(2 * k, 2 * k);
  for (Eigen::Index a = 0; a < 2 * k; ++a) {
    mean(a) = s.mean()(rows[static_cast<std::size_t>(a)]);
    for (Eigen::Index b = 0; b < 2 * k; ++b) {
      disp(a, b) = s.disp()(rows[static_cast<std::size_t>(a)],
                            rows[static_cast<std::size_t>(b)]);
    }
  }
  return GaussianState(std::move(mean), std::move(disp));
}

hermite::HermiteParams pnd_hermite_params(const QRep& q) {
  return hermite::HermiteParams::from_linear_term(q.R, q.ry);
}

double photon_pnd(const GaussianState& s, const hermite::MultiIndex& n) {
  if (n.size() != static_cast<std::size_t>(s.n_modes())) {
    raise(ErrorCode::dimension_mismatch, kModule, "photon_pnd",
          "multi-index length must equal n_modes");
  }
  const QRep q = to_qrep(s);
  const hermite::MultiIndex nn = n.concat(n);
  hermite::HermiteBox box(pnd_hermite_params(q), nn.entries(), true);
  return clipped_probability(q.p0 * box.at(nn).real(), "photon_pnd");
}

PhotonDistribution photon_distribution(const GaussianState& s,
                                       const PndOptions& options) {
  const int n = s.n_modes();
  const QRep q = to_qrep(s);
  const hermite::HermiteParams params = pnd_hermite_params(q);

  // Largest per-mode extent whose 2N-dimensional box fits the index cap.
  int fit = options.per_mode_cap;
  while (fit > 0 && std::pow(fit + 1.0, 2 * n) > static_cast<double>(options.index_cap)) {
    --fit;
  }
  const int limit = std::min(options.per_mode_cap, fit);

  PhotonDistribution dist;
  int extent = std::min(8, limit);
  for (;;) {
    hermite::HermiteBox box(params, std::vector<int>(2 * static_cast<std::size_t>(n), extent),
                            true, options.index_cap);
    dist = PhotonDistribution{};
    std::vector<int> doubled(2 * static_cast<std::size_t>(n), 0);
    bool reached = false;
    for (int degree = 0; degree <= extent && !reached; ++degree) {
      detail::for_each_composition(static_cast<std::size_t>(n), degree, [&](const std::vector<int>& k) {
        std::copy(k.begin(), k.end(), doubled.begin());
        std::copy(k.begin(), k.end(), doubled.begin() + n);
        const double p =
            clipped_probability(q.p0 * box.at(doubled).real(), "photon_distribution");
        dist.indices.emplace_back(k);
        dist.probabilities.push_back(p);
        dist.mass += p;
      });
      dist.max_total_degree = degree;
      reached = dist.mass >= options.mass_target;
    }
    if (reached) return dist;
    if (extent >= limit) {
      dist.cap_hit = true;
      return dist;
    }
    extent = std::min(2 * extent, limit);
  }
}

PhotonMoments photon_moments(const GaussianState& s, int mode,
                             const PndOptions& options) {
  const int modes[] = {mode};
  const GaussianState single = reduced_state(s, modes);
  PhotonMoments out;
  const VectorXd& m = single.mean();
  const MatrixXd& d = single.disp();
  out.mean = 0.5 * (d(0, 0) + d(1, 1) - 1.0) + 0.5 * (m(0) * m(0) + m(1) * m(1));

  const PhotonDistribution dist = photon_distribution(single, options);
  double first = 0.0;
  double second = 0.0;
  for (std::size_t i = 0; i < dist.indices.size(); ++i) {
    const double k = dist.indices[i][0];
    first += k * dist.probabilities[i];
    second += k * k * dist.probabilities[i];
  }
  out.series_mean = first;
  out.series_mass = dist.mass;
  out.variance = second - first * first;
  out.cap_hit = dist.cap_hit;
  return out;
}

}  // namespace qopt::gaussian

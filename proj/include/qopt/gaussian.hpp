#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qopt/hermite.hpp"
#include "qopt/linalg.hpp"

namespace qopt::gaussian {

/// Tag recorded in output metadata: which (R, Ry) convention the Q-function
/// and photon statistics use.
inline constexpr std::string_view kSignConvention =
    "B=(beta,beta*);R=2U^T(I+2M)^-1U-sigma_x;Ry=2U^T(I+2M)^-1<Q>";

/// N-mode Gaussian state: mean quadratures <Q> = (<p_1..p_N>, <q_1..q_N>) and
/// the real symmetric 2N x 2N dispersion matrix M (hbar = 1, vacuum M = I/2).
class GaussianState {
 public:
  /// Symmetrizes disp; rejects wrong shapes, non-finite entries and
  /// asymmetry beyond 1e-12 (relative).
  GaussianState(VectorXd mean, MatrixXd disp);

  int n_modes() const { return n_modes_; }
  const VectorXd& mean() const { return mean_; }
  const MatrixXd& disp() const { return disp_; }

 private:
  int n_modes_;
  VectorXd mean_;
  MatrixXd disp_;
};

GaussianState make_vacuum(int n_modes);
GaussianState make_coherent(std::span<const cplx> alpha);
GaussianState make_thermal_oscillator(double temperature, double omega);

struct StateReport {
  double symmetry_defect = 0.0;
  /// Smallest eigenvalue of M + (i/2) Sigma; negative means the generalized
  /// uncertainty relation is violated.
  double min_uncertainty_eigenvalue = 0.0;
  double purity = 0.0;
  bool uncertainty_ok = false;
};

StateReport validate_state(const GaussianState& s);

double wigner_eval(const GaussianState& s, const VectorXd& quadratures);

/// Q-function parameters: Q(B) = p0 exp(-B (R + sigma_x) B / 2 + B z), z = R y.
struct QRep {
  MatrixXcd R;
  VectorXcd ry;
  /// Present when I - 2M is invertible (never for coherent states).
  std::optional<VectorXcd> y;
  double p0 = 0.0;
};

QRep to_qrep(const GaussianState& s);
GaussianState from_qrep(const QRep& q);

/// Husimi function at beta (length N); B = (beta, beta*).
double q_eval(const GaussianState& s, std::span<const cplx> beta);

/// Pure state N exp(-x m x + c x).
struct PureGaussianSpec {
  MatrixXcd m;
  VectorXcd c;
};

GaussianState from_pure_gaussian(const PureGaussianSpec& spec);

/// Single-mode squeezed vacuum with real squeeze parameter r (sigma_q =
/// e^{-2r}/2).
GaussianState make_squeezed_vacuum(double r);

/// Marginal (reduced) state on the listed modes.
GaussianState reduced_state(const GaussianState& s, std::span<const int> modes);

/// Hermite parameters (R, Ry) of the photon-number generating function.
hermite::HermiteParams pnd_hermite_params(const QRep& q);

double photon_pnd(const GaussianState& s, const hermite::MultiIndex& n);

struct PndOptions {
  double mass_target = 1.0 - 1e-10;
  int per_mode_cap = 64;
  std::size_t index_cap = hermite::kDefaultIndexCap;
};

struct PhotonDistribution {
  std::vector<hermite::MultiIndex> indices;  // ordered by total degree
  std::vector<double> probabilities;
  double mass = 0.0;
  int max_total_degree = 0;
  bool cap_hit = false;
};

/// Enumerates P_n by increasing total degree until the cumulative mass
/// reaches options.mass_target or a cap is hit (reported in cap_hit).
PhotonDistribution photon_distribution(const GaussianState& s,
                                       const PndOptions& options = {});

struct PhotonMoments {
  double mean = 0.0;
  double variance = 0.0;
  double series_mean = 0.0;
  double series_mass = 0.0;
  bool cap_hit = false;
};

PhotonMoments photon_moments(const GaussianState& s, int mode,
                             const PndOptions& options = {1.0 - 1e-10, 512,
                                                          hermite::kDefaultIndexCap});

}  // namespace qopt::gaussian

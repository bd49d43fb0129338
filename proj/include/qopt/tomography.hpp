#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qopt/gaussian.hpp"
#include "qopt/linalg.hpp"

namespace qopt::tomography {

/// count equally spaced points from min to max inclusive.
struct UniformGrid {
  double min = 0.0;
  double max = 0.0;
  int count = 0;

  double step() const { return (max - min) / (count - 1); }
  double at(int i) const { return i == count - 1 ? max : min + i * step(); }
};

/// Throws invalid_argument naming `name` unless count >= 2 and min < max.
void validate_grid(const UniformGrid& g, const std::string& name);

/// W(q_i, p_j) stored as values(i, j).
struct WignerGrid {
  UniformGrid q;
  UniformGrid p;
  MatrixXd values;

  /// Trapezoid estimate of the integral of W dq dp / (2 pi).
  double normalization() const;
  double peak() const { return values.cwiseAbs().maxCoeff(); }
};

/// w(X_j, theta_i) stored as values(i, j), X = q cos(theta) - p sin(theta).
struct Sinogram {
  std::vector<double> theta;
  UniformGrid x;
  MatrixXd values;
  /// |trapezoid integral of the slice - 1| per angle.
  std::vector<double> slice_defect;

  double max_slice_defect() const;
};

using PhaseSpaceFunction = std::function<double(double q, double p)>;

WignerGrid sample_wigner(const PhaseSpaceFunction& w, const UniformGrid& q, const UniformGrid& p);

struct Gaussian1D {
  double mean = 0.0;
  double variance = 0.0;

  double density(double x) const;
};

/// Closed-form marginal of X(theta) for a single-mode Gaussian state.
Gaussian1D forward_marginal_gaussian(const gaussian::GaussianState& s, double theta);

Sinogram gaussian_sinogram(const gaussian::GaussianState& s, const std::vector<double>& theta,
                           const UniformGrid& x);

/// Line integrals of a Wigner grid (bicubic interpolation, zero outside the
/// grid). Requires the grid boundary to decay to 1e-8 of the peak.
Sinogram forward_marginal_numeric(const WignerGrid& w, const std::vector<double>& theta,
                                  const UniformGrid& x);

/// Line integrals of an exact Wigner function over v in [-v_max, v_max]
/// sampled with n_v points.
Sinogram forward_marginal_function(const PhaseSpaceFunction& w, const std::vector<double>& theta,
                                   const UniformGrid& x, double v_max, int n_v = 1025);

/// n angles theta_k = k pi / n.
std::vector<double> uniform_angles(int n);

/// Filtered backprojection with ramp filter |k| exp(-reg_s k^2 / 8), band
/// limited at pi / dx. Needs at least 32 angles and reg_s > 0.
WignerGrid inverse_radon(const Sinogram& s, const UniformGrid& q, const UniformGrid& p,
                         double reg_s);

/// Density of X = mu q + nu p + delta sampled on x.
std::vector<double> symplectic_marginal(const WignerGrid& w, double mu, double nu, double delta,
                                        const UniformGrid& x);

/// Marginals w(X, mu, nu, 0) of X = mu q + nu p: values(i, j) is the density
/// at x_j for direction i.
struct SymplecticFamily {
  std::vector<double> mu;
  std::vector<double> nu;
  UniformGrid x;
  MatrixXd values;
};

SymplecticFamily symplectic_family(const WignerGrid& w, const std::vector<double>& mu,
                                   const std::vector<double>& nu, const UniformGrid& x);

/// Fourier inversion of a symplectic marginal family. Directions must number
/// at least 32 and leave no angular gap larger than pi/16.
class SymplecticInverter {
 public:
  SymplecticInverter(const SymplecticFamily& family, double reg_s);
  double operator()(double q, double p) const;

 private:
  struct Direction {
    double cos_phi;
    double sin_phi;
    double weight;
    std::vector<cplx> chi;  // characteristic function at the k nodes
  };
  std::vector<double> k_;
  std::vector<double> k_weight_;
  std::vector<Direction> dirs_;
};

double wigner_from_symplectic(const SymplecticFamily& family, double q, double p, double reg_s);
WignerGrid wigner_from_symplectic(const SymplecticFamily& family, const UniformGrid& q,
                                  const UniformGrid& p, double reg_s);

}  // namespace qopt::tomography

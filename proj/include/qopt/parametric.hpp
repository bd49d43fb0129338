#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qopt/expression.hpp"
#include "qopt/gaussian.hpp"
#include "qopt/linalg.hpp"

namespace qopt::parametric {

enum class ProfileKind { preset_free, preset_oscillator, preset_repulsive, tabulated, expression };

/// omega^2(t) of the oscillator x'' + omega^2(t) x = 0 (hbar = m = omega(0) = 1).
class FrequencyProfile {
 public:
  static FrequencyProfile preset(ProfileKind kind);
  /// "free", "oscillator" or "repulsive".
  static FrequencyProfile preset(const std::string& name);
  /// Piecewise-linear table of (t, omega^2) with strictly increasing t.
  static FrequencyProfile tabulated(std::vector<std::pair<double, double>> table);
  static FrequencyProfile expression(const std::string& text);

  ProfileKind kind() const { return kind_; }
  bool is_preset() const;
  double omega_squared(double t) const;
  /// Largest t the profile is defined on (infinite except for tables).
  double t_max() const;
  const std::vector<std::pair<double, double>>& table() const { return table_; }
  const std::string& expression_text() const;

 private:
  explicit FrequencyProfile(ProfileKind kind) : kind_(kind) {}
  ProfileKind kind_;
  std::vector<std::pair<double, double>> table_;
  std::shared_ptr<const Expression> expr_;
};

std::string to_string(ProfileKind kind);

struct EpsilonPoint {
  double t = 0.0;
  cplx eps;
  cplx deps;
  /// Continuous (unwrapped) argument of eps, zero at t = 0.
  double phase = 0.0;
};

class EpsilonTrajectory {
 public:
  const FrequencyProfile& profile() const { return profile_; }
  const std::vector<EpsilonPoint>& samples() const { return samples_; }
  double t_end() const { return samples_.back().t; }
  double tolerance() const { return tol_; }
  /// Largest |eps deps* - eps* deps + 2i| over the samples.
  double wronskian_defect() const { return wronskian_defect_; }
  /// Value at any t in [0, t_end]; presets use closed forms, other profiles
  /// integrate forward from the nearest earlier sample.
  EpsilonPoint at(double t) const;

 private:
  friend EpsilonTrajectory solve_epsilon(const FrequencyProfile&, double, double, int);
  EpsilonTrajectory(FrequencyProfile p, double tol) : profile_(std::move(p)), tol_(tol) {}
  FrequencyProfile profile_;
  double tol_;
  std::vector<EpsilonPoint> samples_;
  double wronskian_defect_ = 0.0;
};

/// Integrates eps'' + omega^2(t) eps = 0 from eps(0) = 1, eps'(0) = i.
/// n_intervals = 0 picks a sample spacing of at most 0.05.
EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, double t_end, double tol,
                                int n_intervals = 0);

struct Variances {
  double sigma_x = 0.0;
  double sigma_p = 0.0;
  /// Correlation coefficient; sign of Re(eps* eps').
  double r = 0.0;
};

Variances variances_correlation(const EpsilonTrajectory& traj, double t);

/// mu = (eps* - i eps'*) / (2 (eps* + i eps'*)).
cplx squeeze_mu(const EpsilonPoint& p);

/// Photon-number probability of the squeezed vacuum Psi_0(x, t).
double squeezed_vacuum_pnd(const EpsilonTrajectory& traj, double t, int n);
double squeezed_vacuum_pnd(const EpsilonPoint& p, int n);

/// The Gaussian state of Psi_0(x, t).
gaussian::GaussianState squeezed_vacuum_state(const EpsilonPoint& p);

/// Psi_0(x, t) with the branch of eps^{-1/2} following the unwrapped phase.
cplx ground_wavefunction(const EpsilonPoint& p, double x);

cplx packet_wavefunction(const EpsilonTrajectory& traj, double t, cplx alpha, double x);
cplx packet_wavefunction(const EpsilonPoint& p, cplx alpha, double x);

cplx squeezed_number_wavefunction(const EpsilonTrajectory& traj, double t, int level,
                                  double x);
cplx squeezed_number_wavefunction(const EpsilonPoint& p, int level, double x);

cplx parametric_cat_wavefunction(const EpsilonTrajectory& traj, double t, cplx alpha,
                                 Parity parity, double x);
cplx parametric_cat_wavefunction(const EpsilonPoint& p, cplx alpha, Parity parity, double x);

/// Applies A = (eps d/dx - i eps' x) / sqrt(2) to psi at x by central
/// differences with step h.
cplx apply_integral_of_motion(const EpsilonPoint& p, const std::function<cplx(double)>& psi,
                              double x, double h = 1e-4);

}  // namespace qopt::parametric

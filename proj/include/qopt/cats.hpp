#pragma once

#include <span>

#include "qopt/gaussian.hpp"
#include "qopt/hermite.hpp"
#include "qopt/linalg.hpp"

namespace qopt::cats {

/// Multimode even/odd coherent state N (|A> +- |-A>).
class CatState {
 public:
  /// Throws invalid_argument for an odd state with A = 0.
  CatState(VectorXcd amplitudes, Parity parity);

  int n_modes() const { return static_cast<int>(a_.size()); }
  const VectorXcd& amplitudes() const { return a_; }
  Parity parity() const { return parity_; }
  /// |A|^2 = sum |alpha_m|^2.
  double norm2() const { return norm2_; }

 private:
  VectorXcd a_;
  Parity parity_;
  double norm2_;
};

/// N+ = e^{|A|^2/2} / (2 sqrt(cosh|A|^2)), N- = e^{|A|^2/2} / (2 sqrt(sinh|A|^2)).
double cat_normalization(const CatState& c);

double cat_pnd(const CatState& c, const hermite::MultiIndex& n);

/// Enumerates cat_pnd by total degree until options.mass_target is reached;
/// per_mode_cap bounds each n_i.
gaussian::PhotonDistribution cat_distribution(const CatState& c,
                                              const gaussian::PndOptions& options = {});

struct LadderResult {
  cplx factor;
  CatState state;
};

/// a_i |A+> = alpha_i sqrt(tanh|A|^2) |A->, a_i |A-> = alpha_i sqrt(coth|A|^2) |A+>.
LadderResult cat_ladder_apply(const CatState& c, int mode);

struct CatMoments {
  /// <a_i a_k>.
  MatrixXcd aa;
  /// <(a_i^dagger a_k + a_k a_i^dagger) / 2>.
  MatrixXcd sym_adag_a;
  /// Quadrature dispersion matrix in (p, q) ordering; quadrature means vanish.
  MatrixXd quadrature_disp;
  VectorXd mean_n;
  /// <n_i n_k>.
  MatrixXd second_moment;
  /// <n_i n_k> - <n_i><n_k>.
  MatrixXd covariance;
  /// (Var n_i - <n_i>) / <n_i>; zero for modes with alpha_i = 0.
  VectorXd mandel_q;
};

CatMoments cat_moments(const CatState& c);

/// Husimi function at B (length N).
double cat_q_eval(const CatState& c, std::span<const cplx> b);

/// Wigner function of |A><B| at Z = (q + ip)/sqrt(2) (normalized so that the
/// diagonal A = B case integrates to 1 against dq dp / (2 pi)^N).
cplx coherent_wigner_kernel(const VectorXcd& a, const VectorXcd& b, const VectorXcd& z);

double cat_wigner_eval(const CatState& c, std::span<const double> q, std::span<const double> p);

}  // namespace qopt::cats

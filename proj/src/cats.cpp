#include "qopt/cats.hpp"

#include <cmath>
#include <string>

#include "detail/compositions.hpp"
#include "qopt/errors.hpp"

namespace qopt::cats {

namespace {

constexpr std::string_view kModule = "cats";

double log_cosh(double x) { return x + std::log1p(std::exp(-2.0 * x)) - std::log(2.0); }
double log_sinh(double x) { return x + std::log1p(-std::exp(-2.0 * x)) - std::log(2.0); }

// tanh|A|^2 for even states, coth|A|^2 for odd ones.
double parity_ratio(const CatState& c) {
  const double t = std::tanh(c.norm2());
  return c.parity() == Parity::even ? t : 1.0 / t;
}

}  // namespace

CatState::CatState(VectorXcd amplitudes, Parity parity)
    : a_(std::move(amplitudes)), parity_(parity), norm2_(a_.squaredNorm()) {
  if (a_.size() < 1) {
    raise(ErrorCode::invalid_argument, kModule, "CatState", "at least one mode required");
  }
  if (!a_.allFinite()) {
    raise(ErrorCode::invalid_argument, kModule, "CatState", "non-finite amplitude");
  }
  if (parity_ == Parity::odd && norm2_ == 0.0) {
    raise(ErrorCode::invalid_argument, kModule, "CatState",
          "odd cat state requires |A| > 0 (normalization diverges)");
  }
}

double cat_normalization(const CatState& c) {
  const double a2 = c.norm2();
  const double log_den = c.parity() == Parity::even ? log_cosh(a2) : log_sinh(a2);
  return std::exp(0.5 * a2 - 0.5 * log_den) / 2.0;
}

double cat_pnd(const CatState& c, const hermite::MultiIndex& n) {
  if (n.size() != static_cast<std::size_t>(c.n_modes())) {
    raise(ErrorCode::dimension_mismatch, kModule, "cat_pnd",
          "multi-index length must equal n_modes");
  }
  const bool odd_total = n.total_degree() % 2 == 1;
  if (odd_total != (c.parity() == Parity::odd)) return 0.0;
  double log_p = c.parity() == Parity::even ? -log_cosh(c.norm2()) : -log_sinh(c.norm2());
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double a2 = std::norm(c.amplitudes()(static_cast<Eigen::Index>(i)));
    if (n[i] == 0) continue;
    if (a2 == 0.0) return 0.0;
    log_p += n[i] * std::log(a2) - std::lgamma(n[i] + 1.0);
  }
  return std::exp(log_p);
}

gaussian::PhotonDistribution cat_distribution(const CatState& c,
                                              const gaussian::PndOptions& options) {
  if (options.per_mode_cap < 0) {
    raise(ErrorCode::invalid_argument, kModule, "cat_distribution", "per_mode_cap < 0");
  }
  const auto modes = static_cast<std::size_t>(c.n_modes());
  const int max_degree = options.per_mode_cap * c.n_modes();
  gaussian::PhotonDistribution dist;
  for (int degree = 0; degree <= max_degree; ++degree) {
    detail::for_each_composition(modes, degree, [&](const std::vector<int>& k) {
      for (int v : k) {
        if (v > options.per_mode_cap) return;
      }
      if (dist.indices.size() >= options.index_cap) {
        raise(ErrorCode::resource_limit, kModule, "cat_distribution",
              "index count exceeds the configured cap");
      }
      hermite::MultiIndex idx(k);
      const double p = cat_pnd(c, idx);
      dist.indices.push_back(std::move(idx));
      dist.probabilities.push_back(p);
      dist.mass += p;
    });
    dist.max_total_degree = degree;
    if (dist.mass >= options.mass_target) return dist;
  }
  dist.cap_hit = true;
  return dist;
}

LadderResult cat_ladder_apply(const CatState& c, int mode) {
  if (mode < 0 || mode >= c.n_modes()) {
    raise(ErrorCode::out_of_range, kModule, "cat_ladder_apply",
          "mode index " + std::to_string(mode) + " out of range");
  }
  if (c.norm2() == 0.0) {
    raise(ErrorCode::invalid_argument, kModule, "cat_ladder_apply",
          "a_i annihilates the A = 0 even state; the odd partner is undefined");
  }
  const Parity flipped = c.parity() == Parity::even ? Parity::odd : Parity::even;
  return {c.amplitudes()(mode) * std::sqrt(parity_ratio(c)), CatState(c.amplitudes(), flipped)};
}

CatMoments cat_moments(const CatState& c) {
  const int n = c.n_modes();
  const VectorXcd& a = c.amplitudes();
  const double f = c.norm2() == 0.0 ? 0.0 : parity_ratio(c);
  CatMoments m;
  m.aa = a * a.transpose();
  m.sym_adag_a = f * a.conjugate() * a.transpose() + 0.5 * MatrixXcd::Identity(n, n);

  // Symmetrized second moments of B = (a, a^dagger), then X = U B.
  MatrixXcd s(2 * n, 2 * n);
  s.topLeftCorner(n, n) = m.aa;
  s.bottomRightCorner(n, n) = m.aa.conjugate();
  s.topRightCorner(n, n) = m.sym_adag_a.transpose();
  s.bottomLeftCorner(n, n) = m.sym_adag_a;
  const MatrixXcd u = linalg::quadrature_unitary(n);
  const MatrixXd disp = (u * s * u.transpose()).real();
  m.quadrature_disp = 0.5 * (disp + disp.transpose());

  const VectorXd a2 = a.cwiseAbs2();
  m.mean_n = f * a2;
  // <n_i n_k> = |alpha_i|^2 |alpha_k|^2 + delta_ik <n_i>.
  m.second_moment = a2 * a2.transpose();
  m.second_moment.diagonal() += m.mean_n;
  m.covariance = m.second_moment - m.mean_n * m.mean_n.transpose();
  m.mandel_q = VectorXd::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (m.mean_n(i) > 0.0) {
      m.mandel_q(i) = (m.covariance(i, i) - m.mean_n(i)) / m.mean_n(i);
    }
  }
  return m;
}

double cat_q_eval(const CatState& c, std::span<const cplx> b) {
  if (b.size() != static_cast<std::size_t>(c.n_modes())) {
    raise(ErrorCode::dimension_mismatch, kModule, "cat_q_eval", "B must have length N");
  }
  const VectorXcd bv = Eigen::Map<const VectorXcd>(b.data(), c.n_modes());
  const cplx ab = (c.amplitudes().transpose() * bv.conjugate()).value();
  const double b2 = bv.squaredNorm();
  // 4 N^2 e^{-|A|^2} = 1 / cosh|A|^2 (even) or 1 / sinh|A|^2 (odd).
  if (c.parity() == Parity::even) {
    return std::exp(-b2 - log_cosh(c.norm2())) * std::norm(std::cosh(ab));
  }
  return std::exp(-b2 - log_sinh(c.norm2())) * std::norm(std::sinh(ab));
}

cplx coherent_wigner_kernel(const VectorXcd& a, const VectorXcd& b, const VectorXcd& z) {
  const cplx exponent = -2.0 * z.squaredNorm() + 2.0 * (a.transpose() * z.conjugate()).value() +
                        2.0 * (b.adjoint() * z).value() - (a.transpose() * b.conjugate()).value() -
                        0.5 * a.squaredNorm() - 0.5 * b.squaredNorm();
  return std::pow(2.0, static_cast<double>(a.size())) * std::exp(exponent);
}

double cat_wigner_eval(const CatState& c, std::span<const double> q, std::span<const double> p) {
  const int n = c.n_modes();
  if (q.size() != static_cast<std::size_t>(n) || p.size() != static_cast<std::size_t>(n)) {
    raise(ErrorCode::dimension_mismatch, kModule, "cat_wigner_eval",
          "q and p must have length N");
  }
  VectorXcd z(n);
  for (int k = 0; k < n; ++k) {
    z(k) = cplx(q[static_cast<std::size_t>(k)], p[static_cast<std::size_t>(k)]) / std::sqrt(2.0);
  }
  const VectorXcd& a = c.amplitudes();
  const double sign = c.parity() == Parity::even ? 1.0 : -1.0;
  const cplx sum = coherent_wigner_kernel(a, a, z) + sign * coherent_wigner_kernel(a, -a, z) +
                   sign * coherent_wigner_kernel(-a, a, z) + coherent_wigner_kernel(-a, -a, z);
  const double n2 = cat_normalization(c);
  return (n2 * n2 * sum).real();
}

}  // namespace qopt::cats

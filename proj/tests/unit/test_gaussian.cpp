#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qopt/errors.hpp"
#include "qopt/gaussian.hpp"

using namespace qopt;
using namespace qopt::gaussian;

namespace {

GaussianState coherent(cplx a) {
  const cplx arr[] = {a};
  return make_coherent(arr);
}

double poisson(double mean, int k) {
  return std::exp(-mean + k * std::log(mean) - std::lgamma(k + 1.0));
}

double squeezed_d11(double r, int m) {
  return std::exp(std::lgamma(2 * m + 1.0) - 2.0 * std::lgamma(m + 1.0)) *
         std::pow(std::tanh(r) / 2.0, 2 * m) / std::cosh(r);
}

// Thermal state of `modes` modes transformed by a random symplectic map and
// displaced.
GaussianState random_state(std::mt19937& rng, int modes) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MatrixXd thermal = MatrixXd::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) {
    const double sigma = 0.5 + 0.3 * (u(rng) + 1.0);
    thermal(k, k) = thermal(k + modes, k + modes) = sigma;
  }
  const MatrixXd s = oracle::random_symplectic(rng, modes, 0.4);
  VectorXd mean(2 * modes);
  for (int i = 0; i < 2 * modes; ++i) mean(i) = 0.8 * u(rng);
  return GaussianState(mean, s * thermal * s.transpose());
}

}  // namespace

TEST_SUITE("gaussian") {
  TEST_CASE("coherent constructor") {
    const auto vac = coherent(0.0);
    CHECK(vac.mean().norm() == 0.0);
    CHECK((vac.disp() - 0.5 * MatrixXd::Identity(2, 2)).norm() == 0.0);
    const auto s = coherent(1.0);
    CHECK(std::abs(s.mean()(1) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.mean()(0)) < 1e-15);
    const auto t = coherent(cplx(0.3, -1.2));
    CHECK(std::abs(t.mean()(0) - std::sqrt(2.0) * -1.2) < 1e-15);
    CHECK((t.disp() - 0.5 * MatrixXd::Identity(2, 2)).norm() == 0.0);
  }

  TEST_CASE("thermal constructor") {
    const auto s = make_thermal_oscillator(1.0, 1.0);
    CHECK(std::abs(s.disp()(0, 0) - 0.5 / std::tanh(0.5)) < 1e-14);
    CHECK(std::abs(s.disp()(0, 0) - 1.0820) < 1e-4);
    CHECK(validate_state(s).purity < 1.0);
    CHECK_THROWS_AS(make_thermal_oscillator(0.0, 1.0), Error);
    CHECK_THROWS_AS(make_thermal_oscillator(-1.0, 1.0), Error);
    // Q at the origin equals 1 - exp(-omega / T).
    const cplx zero[] = {0.0};
    CHECK(std::abs(q_eval(s, zero) - (1.0 - std::exp(-1.0))) < 1e-14);
    // Normalization of Q over d^2 beta / pi.
    const double total = oracle::integrate(
        [&](double x) {
          return oracle::integrate(
              [&](double y) {
                const cplx b[] = {cplx(x, y)};
                return q_eval(s, b);
              },
              -12.0, 12.0, 1e-12);
        },
        -12.0, 12.0, 1e-12);
    CHECK(std::abs(total / kPi - 1.0) < 1e-9);
  }

  TEST_CASE("validate_state") {
    const auto r = validate_state(make_vacuum(1));
    CHECK(std::abs(r.min_uncertainty_eigenvalue) < 1e-14);
    CHECK(std::abs(r.purity - 1.0) < 1e-14);
    CHECK(r.uncertainty_ok);
    const auto bad = validate_state(GaussianState(VectorXd::Zero(2), 0.25 * MatrixXd::Identity(2, 2)));
    CHECK_FALSE(bad.uncertainty_ok);
    CHECK(bad.min_uncertainty_eigenvalue < 0.0);
  }

  TEST_CASE("state construction errors") {
    CHECK_THROWS_AS(GaussianState(VectorXd::Zero(3), MatrixXd::Identity(3, 3)), Error);
    CHECK_THROWS_AS(GaussianState(VectorXd::Zero(2), MatrixXd::Identity(4, 4)), Error);
    MatrixXd asym = MatrixXd::Identity(2, 2);
    asym(0, 1) = 0.1;
    CHECK_THROWS_AS(GaussianState(VectorXd::Zero(2), asym), Error);
  }

  TEST_CASE("constructors satisfy the uncertainty relation") {
    const cplx a[] = {cplx(0.4, 0.1), cplx(-1.0, 2.0)};
    for (const auto& s : {make_vacuum(3), make_coherent(a), make_squeezed_vacuum(1.3),
                          make_thermal_oscillator(2.0, 0.7)}) {
      CHECK(validate_state(s).uncertainty_ok);
    }
    CHECK(std::abs(validate_state(make_coherent(a)).purity - 1.0) < 1e-10);
    CHECK(std::abs(validate_state(make_squeezed_vacuum(1.3)).purity - 1.0) < 1e-10);
  }

  TEST_CASE("wigner values") {
    const auto vac = make_vacuum(1);
    CHECK(std::abs(wigner_eval(vac, VectorXd::Zero(2)) - 2.0) < 1e-15);
    VectorXd x(2);
    x << 0.6, 0.8;
    CHECK(std::abs(wigner_eval(vac, x) - 2.0 * std::exp(-1.0)) < 1e-15);
    std::mt19937 rng(1);
    const auto s = random_state(rng, 2);
    CHECK(std::abs(wigner_eval(s, s.mean()) - 1.0 / std::sqrt(s.disp().determinant())) < 1e-12);
  }

  TEST_CASE("Q function values") {
    const auto vac = make_vacuum(1);
    for (double q : {-1.0, 0.0, 0.7}) {
      for (double p : {-0.4, 0.0, 1.9}) {
        const cplx b[] = {cplx(q, p) / std::sqrt(2.0)};
        CHECK(std::abs(q_eval(vac, b) - std::exp(-(p * p + q * q) / 2.0)) < 1e-15);
      }
    }
    const cplx alpha(0.7, -0.4);
    const cplx b[] = {alpha};
    CHECK(std::abs(q_eval(coherent(alpha), b) - 1.0) < 1e-14);
  }

  TEST_CASE("Q is the vacuum smoothing of W") {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
      const auto s = random_state(rng, 1);
      const cplx beta(0.3 * trial - 0.5, 0.2);
      const double qb = std::sqrt(2.0) * beta.real();
      const double pb = std::sqrt(2.0) * beta.imag();
      const cplx smoothed = oracle::integrate2d(
          [&](double q, double p) {
            VectorXd x(2);
            x << p, q;
            return cplx(wigner_eval(s, x) * 2.0 *
                        std::exp(-(q - qb) * (q - qb) - (p - pb) * (p - pb)));
          },
          10.0, 10);
      const cplx b[] = {beta};
      CHECK(std::abs(smoothed.real() / (2.0 * kPi) - q_eval(s, b)) < 1e-6);
    }
  }

  TEST_CASE("QRep anchors and round trip") {
    const auto q0 = to_qrep(make_vacuum(2));
    CHECK(std::abs(q0.p0 - 1.0) < 1e-15);
    CHECK(q0.R.norm() < 1e-15);
    const cplx a(1.1, 0.4);
    CHECK(std::abs(to_qrep(coherent(a)).p0 - std::exp(-std::norm(a))) < 1e-14);
    const auto back = from_qrep(q0);
    CHECK((back.disp() - 0.5 * MatrixXd::Identity(4, 4)).norm() < 1e-14);
    QRep zero{MatrixXcd::Zero(2, 2), VectorXcd::Zero(2), VectorXcd::Zero(2), 1.0};
    CHECK((from_qrep(zero).disp() - 0.5 * MatrixXd::Identity(2, 2)).norm() < 1e-14);

    std::mt19937 rng(8);
    for (int trial = 0; trial < 4; ++trial) {
      const auto s = random_state(rng, 2);
      const auto r = from_qrep(to_qrep(s));
      CHECK((r.disp() - s.disp()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((r.mean() - s.mean()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("pure Gaussian specs") {
    PureGaussianSpec vac{MatrixXcd::Constant(1, 1, 0.5), VectorXcd::Zero(1)};
    const auto v = from_pure_gaussian(vac);
    CHECK((v.disp() - 0.5 * MatrixXd::Identity(2, 2)).norm() < 1e-14);
    const double r = 0.6;
    PureGaussianSpec sq{MatrixXcd::Constant(1, 1, 0.5 * std::exp(2 * r)), VectorXcd::Zero(1)};
    const auto s = from_pure_gaussian(sq);
    CHECK(std::abs(s.disp()(1, 1) - 0.5 * std::exp(-2 * r)) < 1e-14);
    CHECK(std::abs(s.disp()(0, 0) - 0.5 * std::exp(2 * r)) < 1e-14);
    PureGaussianSpec corr{MatrixXcd::Constant(1, 1, cplx(0.8, 0.3)), VectorXcd::Constant(1, cplx(0.2, -0.5))};
    const auto c = from_pure_gaussian(corr);
    CHECK(std::abs(c.disp()(0, 1)) > 1e-3);
    CHECK(std::abs(validate_state(c).purity - 1.0) < 1e-10);
    CHECK(std::abs(validate_state(c).min_uncertainty_eigenvalue) < 1e-10);
    // Mean from the wavefunction by quadrature.
    const double m_re = 0.8;
    const double norm = oracle::integrate(
        [&](double x) { return std::exp(-2.0 * m_re * x * x + 2.0 * 0.2 * x); }, -20, 20);
    const double mean_q = oracle::integrate(
        [&](double x) { return x * std::exp(-2.0 * m_re * x * x + 2.0 * 0.2 * x); }, -20, 20) / norm;
    CHECK(std::abs(c.mean()(1) - mean_q) < 1e-10);
    PureGaussianSpec bad{MatrixXcd::Constant(1, 1, -0.5), VectorXcd::Zero(1)};
    CHECK_THROWS_AS(from_pure_gaussian(bad), Error);
  }

  TEST_CASE("Poisson statistics for coherent states") {
    const cplx a(1.5, 0.0);
    const auto s = coherent(a);
    for (int k = 0; k <= 20; ++k) {
      CHECK(std::abs(photon_pnd(s, {k}) - poisson(2.25, k)) < 1e-10);
    }
    const cplx b[] = {cplx(0.5, 0.5), cplx(-0.7, 0.1)};
    const auto two = make_coherent(b);
    CHECK(std::abs(photon_pnd(two, {2, 3}) - poisson(0.5, 2) * poisson(0.5, 3)) < 1e-12);
  }

  TEST_CASE("vacuum and squeezed vacuum statistics") {
    const auto vac = make_vacuum(1);
    CHECK(std::abs(photon_pnd(vac, {0}) - 1.0) < 1e-15);
    CHECK(std::abs(photon_pnd(vac, {3})) < 1e-15);
    for (double r : {0.5, 1.0, 2.0}) {
      const auto s = make_squeezed_vacuum(r);
      for (int m = 0; m <= 15; ++m) {
        CHECK(std::abs(photon_pnd(s, {2 * m}) - squeezed_d11(r, m)) < 1e-10);
        CHECK(std::abs(photon_pnd(s, {2 * m + 1})) < 1e-12);
      }
    }
  }

  TEST_CASE("distribution normalization and moments") {
    std::mt19937 rng(12);
    const auto s = random_state(rng, 2);
    const auto d = photon_distribution(s);
    CHECK(d.mass >= 1.0 - 1e-8);
    CHECK_FALSE(d.cap_hit);
    for (std::size_t i = 1; i < d.indices.size(); ++i) {
      CHECK(d.indices[i - 1].total_degree() <= d.indices[i].total_degree());
    }
    const int modes[] = {0};
    const auto m = photon_moments(s, 0);
    const auto single = photon_distribution(reduced_state(s, modes));
    double mean = 0.0;
    for (std::size_t i = 0; i < single.indices.size(); ++i) mean += single.indices[i][0] * single.probabilities[i];
    CHECK(std::abs(mean - m.mean) < 1e-8);
    CHECK(std::abs(m.series_mean - m.mean) < 1e-8);
  }

  TEST_CASE("photon moments anchors") {
    const cplx b[] = {cplx(1.2, -0.5), cplx(0.3, 0.0)};
    const auto s = make_coherent(b);
    for (int j = 0; j < 2; ++j) {
      const auto m = photon_moments(s, j);
      CHECK(std::abs(m.mean - std::norm(b[j])) < 1e-10);
      CHECK(std::abs(m.variance - std::norm(b[j])) < 1e-8);
    }
    const auto v = photon_moments(make_vacuum(1), 0);
    CHECK(std::abs(v.mean) < 1e-15);
    CHECK(std::abs(v.variance) < 1e-12);
    const auto sq = photon_moments(make_squeezed_vacuum(1.0), 0);
    double series = 0.0;
    for (int m = 0; m < 400; ++m) series += 2 * m * squeezed_d11(1.0, m);
    CHECK(std::abs(sq.mean - std::sinh(1.0) * std::sinh(1.0)) < 1e-12);
    CHECK(std::abs(sq.mean - series) < 1e-8);
    CHECK_THROWS_AS(photon_moments(make_vacuum(1), 1), Error);
  }

  TEST_CASE("distribution cap is reported") {
    PndOptions opts;
    opts.per_mode_cap = 4;
    const auto d = photon_distribution(make_squeezed_vacuum(2.0), opts);
    CHECK(d.cap_hit);
    CHECK(d.mass < 1.0 - 1e-3);
  }

  TEST_CASE("reduced state") {
    std::mt19937 rng(31);
    const auto s = random_state(rng, 3);
    const int modes[] = {2, 0};
    const auto r = reduced_state(s, modes);
    CHECK(r.n_modes() == 2);
    CHECK(r.disp()(0, 0) == s.disp()(2, 2));
    CHECK(r.disp()(1, 3) == s.disp()(0, 3));
    CHECK(r.mean()(3) == s.mean()(3));
    const int bad[] = {3};
    CHECK_THROWS_AS(reduced_state(s, bad), Error);
  }
}

#include <doctest.h>

#include "oracles.hpp"
#include "qopt/cats.hpp"
#include "qopt/errors.hpp"
#include "qopt/parametric.hpp"

using namespace qopt;
using namespace qopt::cats;

namespace {

VectorXcd amps(std::initializer_list<cplx> a) {
  VectorXcd v(static_cast<Eigen::Index>(a.size()));
  Eigen::Index k = 0;
  for (cplx z : a) v(k++) = z;
  return v;
}

// Projections onto number states computed from the coherent-state expansion
// <n|alpha> = exp(-|alpha|^2/2) alpha^n / sqrt(n!).
cplx number_amplitude(const VectorXcd& a, Parity parity, const std::vector<int>& n) {
  const double a2 = a.squaredNorm();
  const double norm = 1.0 / std::sqrt(2.0 + (parity == Parity::even ? 2.0 : -2.0) * std::exp(-2.0 * a2));
  cplx plus = std::exp(-a2 / 2.0);
  cplx minus = plus;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const cplx ai = a(static_cast<Eigen::Index>(i));
    plus *= std::pow(ai, n[i]) / std::sqrt(oracle::factorial(n[i]));
    minus *= std::pow(-ai, n[i]) / std::sqrt(oracle::factorial(n[i]));
  }
  return norm * (parity == Parity::even ? plus + minus : plus - minus);
}

cplx coherent_overlap(const VectorXcd& b, const VectorXcd& a) {
  return std::exp(-0.5 * b.squaredNorm() - 0.5 * a.squaredNorm() + (b.adjoint() * a).value());
}

}  // namespace

TEST_SUITE("cats") {
  TEST_CASE("normalization constants") {
    for (double x : {0.3, 1.0, 2.5}) {
      const CatState even(amps({cplx(x, 0.0)}), Parity::even);
      const CatState odd(amps({cplx(0.0, x)}), Parity::odd);
      const double a2 = x * x;
      CHECK(cat_normalization(even) == doctest::Approx(1.0 / std::sqrt(2.0 + 2.0 * std::exp(-2.0 * a2))));
      CHECK(cat_normalization(odd) == doctest::Approx(1.0 / std::sqrt(2.0 - 2.0 * std::exp(-2.0 * a2))));
    }
    CHECK(cat_normalization(CatState(amps({0.0}), Parity::even)) == doctest::Approx(0.5));
    CHECK(std::isfinite(cat_normalization(CatState(amps({30.0}), Parity::odd))));
  }

  TEST_CASE("photon distribution") {
    const VectorXcd a = amps({cplx(0.8, 0.3), cplx(-0.4, 1.1)});
    for (auto parity : {Parity::even, Parity::odd}) {
      const CatState c(a, parity);
      for (int n1 = 0; n1 <= 6; ++n1) {
        for (int n2 = 0; n2 <= 6; ++n2) {
          const double expect = std::norm(number_amplitude(a, parity, {n1, n2}));
          const double got = cat_pnd(c, {n1, n2});
          CHECK(std::abs(got - expect) <= 1e-13);
          if ((n1 + n2) % 2 != (parity == Parity::odd ? 1 : 0)) CHECK(got == 0.0);
        }
      }
      const auto dist = cat_distribution(c);
      CHECK(dist.mass >= 1.0 - 1e-8);
      CHECK_FALSE(dist.cap_hit);
    }
    CHECK_THROWS_AS(cat_pnd(CatState(a, Parity::even), {1}), Error);
  }

  TEST_CASE("large amplitudes stay finite") {
    const CatState c(amps({cplx(3.0, 0.0), cplx(0.0, 2.0)}), Parity::odd);
    const auto dist = cat_distribution(c);
    CHECK(dist.mass >= 1.0 - 1e-8);
    for (double p : dist.probabilities) CHECK(std::isfinite(p));
  }

  TEST_CASE("moments match distribution sums") {
    const VectorXcd a = amps({cplx(1.1, 0.2), cplx(0.3, -0.7)});
    for (auto parity : {Parity::even, Parity::odd}) {
      const CatState c(a, parity);
      const auto m = cat_moments(c);
      const auto dist = cat_distribution(c, {1.0 - 1e-14, 64});
      VectorXd mean = VectorXd::Zero(2);
      MatrixXd second = MatrixXd::Zero(2, 2);
      for (std::size_t k = 0; k < dist.indices.size(); ++k) {
        const double p = dist.probabilities[k];
        for (int i = 0; i < 2; ++i) {
          mean(i) += p * dist.indices[k][i];
          for (int j = 0; j < 2; ++j) second(i, j) += p * dist.indices[k][i] * dist.indices[k][j];
        }
      }
      CHECK((m.mean_n - mean).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((m.second_moment - second).cwiseAbs().maxCoeff() < 1e-9);
      // Nonfactorizable: the modes are correlated.
      CHECK(std::abs(m.covariance(0, 1)) > 1e-3);
      const double x = a.squaredNorm();
      const double ratio = parity == Parity::even ? std::tanh(x) : 1.0 / std::tanh(x);
      CHECK(m.mean_n(0) == doctest::Approx(std::norm(a(0)) * ratio));
    }
  }

  TEST_CASE("Mandel parameter sign") {
    for (double x : {0.5, 1.0, 2.0}) {
      const CatState even(amps({x}), Parity::even);
      const CatState odd(amps({x}), Parity::odd);
      CHECK(cat_moments(even).mandel_q(0) > 0.0);
      CHECK(cat_moments(odd).mandel_q(0) < 0.0);
    }
    CHECK(cat_moments(CatState(amps({1.0, 0.0}), Parity::even)).mandel_q(1) == 0.0);
  }

  TEST_CASE("quadrature dispersion") {
    const cplx alpha(0.9, 0.4);
    for (auto parity : {Parity::even, Parity::odd}) {
      const CatState c(amps({alpha}), parity);
      const auto m = cat_moments(c);
      const double x = std::norm(alpha);
      const double n = x * (parity == Parity::even ? std::tanh(x) : 1.0 / std::tanh(x));
      const double aa = 2.0 * (alpha * alpha).real();
      CHECK(m.quadrature_disp(1, 1) == doctest::Approx(0.5 * (aa + 2.0 * n + 1.0)));
      CHECK(m.quadrature_disp(0, 0) == doctest::Approx(-0.5 * (aa - 2.0 * n - 1.0)));
      CHECK(m.quadrature_disp(0, 1) == doctest::Approx((alpha * alpha).imag()));
      CHECK(m.quadrature_disp.determinant() >= 0.25 - 1e-12);
    }
  }

  TEST_CASE("ladder action") {
    const VectorXcd a = amps({cplx(0.6, 0.2), cplx(-0.5, 0.9)});
    const CatState even(a, Parity::even);
    const auto r = cat_ladder_apply(even, 1);
    CHECK(r.state.parity() == Parity::odd);
    CHECK(std::abs(r.factor - a(1) * std::sqrt(std::tanh(a.squaredNorm()))) < 1e-14);
    // <n|a_1|A+> = sqrt(n_1 + 1) <n + e_1|A+>.
    for (int n1 = 0; n1 <= 3; ++n1) {
      for (int n2 = 0; n2 <= 3; ++n2) {
        const cplx lhs = std::sqrt(n2 + 1.0) * number_amplitude(a, Parity::even, {n1, n2 + 1});
        const cplx rhs = r.factor * number_amplitude(a, Parity::odd, {n1, n2});
        CHECK(std::abs(lhs - rhs) < 1e-13);
      }
    }
    const auto back = cat_ladder_apply(r.state, 0);
    CHECK(back.state.parity() == Parity::even);
    CHECK(std::abs(back.factor - a(0) / std::sqrt(std::tanh(a.squaredNorm()))) < 1e-13);
    CHECK_THROWS_AS(cat_ladder_apply(even, 2), Error);
    CHECK_THROWS_AS(cat_ladder_apply(CatState(amps({0.0}), Parity::even), 0), Error);
  }

  TEST_CASE("Wigner function") {
    const CatState odd(amps({1.5}), Parity::odd);
    const CatState even(amps({1.5}), Parity::even);
    const double zero[] = {0.0};
    CHECK(cat_wigner_eval(odd, zero, zero) == doctest::Approx(-2.0));
    CHECK(cat_wigner_eval(even, zero, zero) == doctest::Approx(2.0));
    const auto norm = oracle::integrate2d(
        [&](double q, double p) {
          const double qq[] = {q};
          const double pp[] = {p};
          return cplx(cat_wigner_eval(odd, qq, pp));
        },
        9.0, 12);
    CHECK(norm.real() / (2.0 * kPi) == doctest::Approx(1.0).epsilon(1e-8));

    // Position marginal equals |psi(q)|^2 of the same cat in wave mechanics.
    const parametric::EpsilonPoint t0{0.0, 1.0, cplx(0.0, 1.0), 0.0};
    for (double q : {-1.7, 0.0, 0.4, 2.2}) {
      const double marginal = oracle::integrate(
          [&](double p) {
            const double qq[] = {q};
            const double pp[] = {p};
            return cat_wigner_eval(odd, qq, pp);
          },
          -12.0, 12.0, 1e-13) / (2.0 * kPi);
      const double density = std::norm(parametric::parametric_cat_wavefunction(t0, 1.5, Parity::odd, q));
      CHECK(std::abs(marginal - density) < 1e-9);
    }
  }

  TEST_CASE("two-mode odd Wigner at the origin") {
    const CatState c(amps({cplx(1.0, 0.5), cplx(-0.7, 0.2)}), Parity::odd);
    const double q[] = {0.0, 0.0};
    const double p[] = {0.0, 0.0};
    CHECK(cat_wigner_eval(c, q, p) == doctest::Approx(-4.0));
  }

  TEST_CASE("Husimi function") {
    const VectorXcd a = amps({cplx(0.8, -0.6), cplx(0.2, 0.5)});
    for (auto parity : {Parity::even, Parity::odd}) {
      const CatState c(a, parity);
      const double s = parity == Parity::even ? 1.0 : -1.0;
      const double norm = 1.0 / std::sqrt(2.0 + 2.0 * s * std::exp(-2.0 * a.squaredNorm()));
      for (const auto& b : {amps({0.3, -0.1}), amps({cplx(1.0, 1.0), cplx(-0.5, 0.0)})}) {
        const double expect = std::norm(norm * (coherent_overlap(b, a) + s * coherent_overlap(b, -a)));
        const cplx bb[] = {b(0), b(1)};
        CHECK(cat_q_eval(c, bb) == doctest::Approx(expect).epsilon(1e-12));
      }
    }
    const cplx one[] = {0.0};
    CHECK_THROWS_AS(cat_q_eval(CatState(a, Parity::even), one), Error);
  }

  TEST_CASE("construction errors") {
    CHECK_THROWS_AS(CatState(amps({0.0, 0.0}), Parity::odd), Error);
    CHECK_THROWS_AS(CatState(VectorXcd(0), Parity::even), Error);
    CHECK_THROWS_AS(CatState(amps({std::nan("")}), Parity::even), Error);
  }
}

#include "qopt/tomography.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>
#include <string>

#include <boost/math/quadrature/gauss.hpp>

#include "qopt/errors.hpp"
#include "qopt/parallel.hpp"

namespace qopt::tomography {

namespace {

constexpr std::string_view kModule = "tomography";

double trapezoid(const double* v, int n, double h) {
  double s = 0.5 * (v[0] + v[n - 1]);
  for (int i = 1; i + 1 < n; ++i) s += v[i];
  return s * h;
}

void fill_defects(Sinogram& s) {
  const int nx = s.x.count;
  s.slice_defect.assign(s.theta.size(), 0.0);
  for (std::size_t i = 0; i < s.theta.size(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(nx));
    for (int j = 0; j < nx; ++j) row[static_cast<std::size_t>(j)] = s.values(static_cast<Eigen::Index>(i), j);
    s.slice_defect[i] = std::abs(trapezoid(row.data(), nx, s.x.step()) - 1.0);
  }
}

void validate_angles(const std::vector<double>& theta, std::string_view op) {
  if (theta.empty()) raise(ErrorCode::invalid_argument, kModule, op, "no angles");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!(theta[i] >= 0.0 && theta[i] < kPi)) {
      raise(ErrorCode::invalid_argument, kModule, op, "angles must lie in [0, pi)");
    }
    if (i > 0 && !(theta[i] > theta[i - 1])) {
      raise(ErrorCode::invalid_argument, kModule, op, "angles must be strictly increasing");
    }
  }
}

// Cubic Lagrange weights for nodes -1, 0, 1, 2 at t in [0, 1).
std::array<double, 4> cubic_weights(double t) {
  return {-t * (t - 1.0) * (t - 2.0) / 6.0, (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
          -(t + 1.0) * t * (t - 2.0) / 2.0, (t + 1.0) * t * (t - 1.0) / 6.0};
}

double interpolate(const WignerGrid& w, double q, double p) {
  if (q < w.q.min || q > w.q.max || p < w.p.min || p > w.p.max) return 0.0;
  const double fq = (q - w.q.min) / w.q.step();
  const double fp = (p - w.p.min) / w.p.step();
  const int iq = std::min(static_cast<int>(std::floor(fq)), w.q.count - 2);
  const int ip = std::min(static_cast<int>(std::floor(fp)), w.p.count - 2);
  const auto wq = cubic_weights(fq - iq);
  const auto wp = cubic_weights(fp - ip);
  double sum = 0.0;
  for (int a = 0; a < 4; ++a) {
    const int i = iq - 1 + a;
    if (i < 0 || i >= w.q.count) continue;
    for (int b = 0; b < 4; ++b) {
      const int j = ip - 1 + b;
      if (j < 0 || j >= w.p.count) continue;
      sum += wq[static_cast<std::size_t>(a)] * wp[static_cast<std::size_t>(b)] * w.values(i, j);
    }
  }
  return sum;
}

// (1/2pi) integral over v of W(X cos + v sin, -X sin + v cos).
double line_integral(const WignerGrid& w, double theta, double x, double v_max, double dv,
                     int n_v) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  double sum = 0.0;
  for (int k = 0; k < n_v; ++k) {
    const double v = -v_max + k * dv;
    const double f = interpolate(w, x * c + v * s, -x * s + v * c);
    sum += (k == 0 || k == n_v - 1) ? 0.5 * f : f;
  }
  return sum * dv / (2.0 * kPi);
}

struct LineSampling {
  double v_max;
  double dv;
  int n_v;
};

LineSampling line_sampling(const WignerGrid& w) {
  double r = 0.0;
  for (double q : {w.q.min, w.q.max}) {
    for (double p : {w.p.min, w.p.max}) r = std::max(r, std::hypot(q, p));
  }
  const double dv = 0.5 * std::min(w.q.step(), w.p.step());
  const int n_v = 2 * static_cast<int>(std::ceil(r / dv)) + 1;
  return {r, 2.0 * r / (n_v - 1), n_v};
}

void check_support(const WignerGrid& w, std::string_view op) {
  if (w.values.rows() != w.q.count || w.values.cols() != w.p.count) {
    raise(ErrorCode::dimension_mismatch, kModule, op, "Wigner grid values do not match the axes");
  }
  const double peak = w.peak();
  double edge = 0.0;
  const Eigen::Index nq = w.values.rows();
  const Eigen::Index np = w.values.cols();
  edge = std::max({w.values.row(0).cwiseAbs().maxCoeff(), w.values.row(nq - 1).cwiseAbs().maxCoeff(),
                   w.values.col(0).cwiseAbs().maxCoeff(), w.values.col(np - 1).cwiseAbs().maxCoeff()});
  if (edge > 1e-8 * peak) {
    raise(ErrorCode::invalid_argument, kModule, op,
          "insufficient support coverage: boundary value " + std::to_string(edge) +
              " exceeds 1e-8 of the peak " + std::to_string(peak));
  }
}

// Ramp kernel (1/pi) int_0^K k exp(-s k^2/8) cos(k x) dk.
double ramp_kernel(double x, double k_max, double reg_s) {
  const double panel_phase = 1.0;
  const int panels =
      std::max(16, static_cast<int>(std::ceil(k_max * std::max(std::abs(x), 1.0) / panel_phase)));
  const double width = k_max / panels;
  auto f = [&](double k) { return k * std::exp(-reg_s * k * k / 8.0) * std::cos(k * x); };
  double sum = 0.0;
  for (int i = 0; i < panels; ++i) {
    sum += boost::math::quadrature::gauss<double, 10>::integrate(f, i * width, (i + 1) * width);
  }
  return sum / kPi;
}

// Interval weights for angles sampled periodically over [0, pi).
std::vector<double> periodic_weights(const std::vector<double>& phi) {
  const std::size_t n = phi.size();
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double prev = i == 0 ? phi[n - 1] - kPi : phi[i - 1];
    const double next = i + 1 == n ? phi[0] + kPi : phi[i + 1];
    w[i] = 0.5 * (next - prev);
  }
  return w;
}

}  // namespace

void validate_grid(const UniformGrid& g, const std::string& name) {
  if (g.count < 2 || !std::isfinite(g.min) || !std::isfinite(g.max) || !(g.min < g.max)) {
    raise(ErrorCode::invalid_argument, kModule, "grid",
          "grid '" + name + "' must have count >= 2 and strictly increasing bounds");
  }
}

double WignerGrid::normalization() const {
  double sum = 0.0;
  for (int i = 0; i < q.count; ++i) {
    const double wi = (i == 0 || i == q.count - 1) ? 0.5 : 1.0;
    for (int j = 0; j < p.count; ++j) {
      const double wj = (j == 0 || j == p.count - 1) ? 0.5 : 1.0;
      sum += wi * wj * values(i, j);
    }
  }
  return sum * q.step() * p.step() / (2.0 * kPi);
}

double Sinogram::max_slice_defect() const {
  return slice_defect.empty() ? 0.0 : *std::max_element(slice_defect.begin(), slice_defect.end());
}

WignerGrid sample_wigner(const PhaseSpaceFunction& w, const UniformGrid& q, const UniformGrid& p) {
  validate_grid(q, "q");
  validate_grid(p, "p");
  WignerGrid out{q, p, MatrixXd(q.count, p.count)};
  parallel_for(static_cast<std::size_t>(q.count), [&](std::size_t i) {
    const auto ii = static_cast<int>(i);
    for (int j = 0; j < p.count; ++j) out.values(ii, j) = w(q.at(ii), p.at(j));
  });
  return out;
}

double Gaussian1D::density(double x) const {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * kPi * variance);
}

Gaussian1D forward_marginal_gaussian(const gaussian::GaussianState& s, double theta) {
  if (s.n_modes() != 1) {
    raise(ErrorCode::dimension_mismatch, kModule, "forward_marginal_gaussian",
          "single-mode state required");
  }
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  const double mp = s.mean()(0);
  const double mq = s.mean()(1);
  const double spp = s.disp()(0, 0);
  const double sqq = s.disp()(1, 1);
  const double spq = s.disp()(0, 1);
  return {mq * c - mp * sn, sqq * c * c + spp * sn * sn - 2.0 * spq * sn * c};
}

Sinogram gaussian_sinogram(const gaussian::GaussianState& s, const std::vector<double>& theta,
                           const UniformGrid& x) {
  validate_angles(theta, "gaussian_sinogram");
  validate_grid(x, "x");
  Sinogram out{theta, x, MatrixXd(static_cast<Eigen::Index>(theta.size()), x.count), {}};
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const Gaussian1D g = forward_marginal_gaussian(s, theta[i]);
    for (int j = 0; j < x.count; ++j) out.values(static_cast<Eigen::Index>(i), j) = g.density(x.at(j));
  }
  fill_defects(out);
  return out;
}

Sinogram forward_marginal_numeric(const WignerGrid& w, const std::vector<double>& theta,
                                  const UniformGrid& x) {
  constexpr std::string_view op = "forward_marginal_numeric";
  validate_angles(theta, op);
  validate_grid(x, "x");
  check_support(w, op);
  const LineSampling ls = line_sampling(w);
  Sinogram out{theta, x, MatrixXd(static_cast<Eigen::Index>(theta.size()), x.count), {}};
  parallel_for(theta.size(), [&](std::size_t i) {
    for (int j = 0; j < x.count; ++j) {
      out.values(static_cast<Eigen::Index>(i), j) =
          line_integral(w, theta[i], x.at(j), ls.v_max, ls.dv, ls.n_v);
    }
  });
  fill_defects(out);
  return out;
}

Sinogram forward_marginal_function(const PhaseSpaceFunction& w, const std::vector<double>& theta,
                                   const UniformGrid& x, double v_max, int n_v) {
  constexpr std::string_view op = "forward_marginal_function";
  validate_angles(theta, op);
  validate_grid(x, "x");
  if (!(v_max > 0.0) || n_v < 3) {
    raise(ErrorCode::invalid_argument, kModule, op, "need v_max > 0 and n_v >= 3");
  }
  const double dv = 2.0 * v_max / (n_v - 1);
  Sinogram out{theta, x, MatrixXd(static_cast<Eigen::Index>(theta.size()), x.count), {}};
  parallel_for(theta.size(), [&](std::size_t i) {
    const double c = std::cos(theta[i]);
    const double s = std::sin(theta[i]);
    for (int j = 0; j < x.count; ++j) {
      const double xx = x.at(j);
      double sum = 0.0;
      for (int k = 0; k < n_v; ++k) {
        const double v = -v_max + k * dv;
        const double f = w(xx * c + v * s, -xx * s + v * c);
        sum += (k == 0 || k == n_v - 1) ? 0.5 * f : f;
      }
      out.values(static_cast<Eigen::Index>(i), j) = sum * dv / (2.0 * kPi);
    }
  });
  fill_defects(out);
  return out;
}

std::vector<double> uniform_angles(int n) {
  if (n < 1) raise(ErrorCode::invalid_argument, kModule, "uniform_angles", "n must be >= 1");
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) theta[static_cast<std::size_t>(k)] = k * kPi / n;
  return theta;
}

WignerGrid inverse_radon(const Sinogram& s, const UniformGrid& q, const UniformGrid& p,
                         double reg_s) {
  constexpr std::string_view op = "inverse_radon";
  validate_angles(s.theta, op);
  validate_grid(s.x, "x");
  validate_grid(q, "q");
  validate_grid(p, "p");
  if (s.theta.size() < 32) {
    raise(ErrorCode::invalid_argument, kModule, op,
          "too few angles: " + std::to_string(s.theta.size()) + " < 32");
  }
  if (!(reg_s > 0.0)) raise(ErrorCode::invalid_argument, kModule, op, "reg_s must be positive");
  if (s.values.rows() != static_cast<Eigen::Index>(s.theta.size()) || s.values.cols() != s.x.count) {
    raise(ErrorCode::dimension_mismatch, kModule, op, "sinogram values do not match the axes");
  }

  constexpr int kOversample = 4;
  const int nx = s.x.count;
  const double dx = s.x.step();
  const double k_max = kPi / dx;
  const int n_fine = kOversample * (nx - 1) + 1;
  const double dfine = dx / kOversample;

  std::vector<double> kernel(static_cast<std::size_t>(n_fine));
  parallel_for(kernel.size(), [&](std::size_t lag) {
    kernel[lag] = ramp_kernel(static_cast<double>(lag) * dfine, k_max, reg_s);
  });

  const std::size_t n_theta = s.theta.size();
  MatrixXd filtered(static_cast<Eigen::Index>(n_theta), n_fine);
  parallel_for(n_theta, [&](std::size_t i) {
    const auto ii = static_cast<Eigen::Index>(i);
    for (int m = 0; m < n_fine; ++m) {
      double sum = 0.0;
      for (int j = 0; j < nx; ++j) {
        sum += s.values(ii, j) * kernel[static_cast<std::size_t>(std::abs(m - kOversample * j))];
      }
      filtered(ii, m) = sum * dx;
    }
  });

  const std::vector<double> weights = periodic_weights(s.theta);
  std::vector<double> cs(n_theta);
  std::vector<double> sn(n_theta);
  for (std::size_t i = 0; i < n_theta; ++i) {
    cs[i] = std::cos(s.theta[i]);
    sn[i] = std::sin(s.theta[i]);
  }
  WignerGrid out{q, p, MatrixXd(q.count, p.count)};
  parallel_for(static_cast<std::size_t>(q.count), [&](std::size_t a) {
    const auto ia = static_cast<int>(a);
    const double qq = q.at(ia);
    for (int b = 0; b < p.count; ++b) {
      const double pp = p.at(b);
      double sum = 0.0;
      for (std::size_t i = 0; i < n_theta; ++i) {
        const double f = (qq * cs[i] - pp * sn[i] - s.x.min) / dfine;
        if (f < 0.0 || f > n_fine - 1) continue;
        const int m = std::min(static_cast<int>(f), n_fine - 2);
        const double t = f - m;
        const auto ii = static_cast<Eigen::Index>(i);
        sum += weights[i] * ((1.0 - t) * filtered(ii, m) + t * filtered(ii, m + 1));
      }
      out.values(ia, b) = sum;
    }
  });
  return out;
}

std::vector<double> symplectic_marginal(const WignerGrid& w, double mu, double nu, double delta,
                                        const UniformGrid& x) {
  constexpr std::string_view op = "symplectic_marginal";
  validate_grid(x, "x");
  const double len = std::hypot(mu, nu);
  if (!(len > 0.0) || !std::isfinite(len)) {
    raise(ErrorCode::invalid_argument, kModule, op, "degenerate direction (mu, nu) = (0, 0)");
  }
  check_support(w, op);
  // mu q + nu p = len (q cos(theta) - p sin(theta)).
  const double theta = std::atan2(-nu, mu);
  const LineSampling ls = line_sampling(w);
  std::vector<double> out(static_cast<std::size_t>(x.count));
  parallel_for(out.size(), [&](std::size_t j) {
    const double xr = (x.at(static_cast<int>(j)) - delta) / len;
    out[j] = line_integral(w, theta, xr, ls.v_max, ls.dv, ls.n_v) / len;
  });
  return out;
}

SymplecticFamily symplectic_family(const WignerGrid& w, const std::vector<double>& mu,
                                   const std::vector<double>& nu, const UniformGrid& x) {
  if (mu.size() != nu.size() || mu.empty()) {
    raise(ErrorCode::dimension_mismatch, kModule, "symplectic_family",
          "mu and nu must be nonempty and of equal length");
  }
  SymplecticFamily fam{mu, nu, x, MatrixXd(static_cast<Eigen::Index>(mu.size()), x.count)};
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const auto row = symplectic_marginal(w, mu[i], nu[i], 0.0, x);
    for (int j = 0; j < x.count; ++j) fam.values(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
  }
  return fam;
}

SymplecticInverter::SymplecticInverter(const SymplecticFamily& family, double reg_s) {
  constexpr std::string_view op = "wigner_from_symplectic";
  validate_grid(family.x, "x");
  if (!(reg_s > 0.0)) raise(ErrorCode::invalid_argument, kModule, op, "reg_s must be positive");
  const std::size_t n = family.mu.size();
  if (family.nu.size() != n || family.values.rows() != static_cast<Eigen::Index>(n) ||
      family.values.cols() != family.x.count) {
    raise(ErrorCode::dimension_mismatch, kModule, op, "marginal family shape mismatch");
  }
  if (n < 32) {
    raise(ErrorCode::invalid_argument, kModule, op,
          "insufficient (mu, nu) coverage: " + std::to_string(n) + " < 32 directions");
  }

  struct Raw {
    double phi;
    double len;
    bool flip;
    std::size_t row;
  };
  std::vector<Raw> raw;
  double min_len = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double len = std::hypot(family.mu[i], family.nu[i]);
    if (!(len > 0.0)) raise(ErrorCode::invalid_argument, kModule, op, "degenerate direction");
    double phi = std::atan2(family.nu[i], family.mu[i]);
    bool flip = false;
    if (phi < 0.0) {
      phi += kPi;
      flip = true;
    }
    if (phi >= kPi) {
      phi -= kPi;
      flip = !flip;
    }
    raw.push_back({phi, len, flip, i});
    min_len = std::min(min_len, len);
  }
  std::sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.phi < b.phi; });
  std::vector<double> phis;
  for (const auto& r : raw) phis.push_back(r.phi);
  double gap = phis.front() + kPi - phis.back();
  for (std::size_t i = 1; i < n; ++i) gap = std::max(gap, phis[i] - phis[i - 1]);
  if (gap > kPi / 16.0 + 1e-12) {
    raise(ErrorCode::invalid_argument, kModule, op,
          "insufficient (mu, nu) coverage: angular gap " + std::to_string(gap) + " > pi/16");
  }
  const std::vector<double> weights = periodic_weights(phis);

  // Simpson nodes on [0, K]; K is the Nyquist limit of the coarsest direction.
  const double dx = family.x.step();
  const double k_max = std::min(kPi * min_len / dx, std::sqrt(8.0 * 40.0 / reg_s));
  constexpr int kIntervals = 2048;
  const double dk = k_max / kIntervals;
  for (int j = 0; j <= kIntervals; ++j) {
    const double k = j * dk;
    const double simpson = (j == 0 || j == kIntervals) ? 1.0 : (j % 2 == 1 ? 4.0 : 2.0);
    k_.push_back(k);
    k_weight_.push_back(simpson * dk / 3.0 * k * std::exp(-reg_s * k * k / 8.0));
  }

  dirs_.resize(n);
  parallel_for(n, [&](std::size_t d) {
    const Raw& r = raw[d];
    Direction& dir = dirs_[d];
    dir.cos_phi = std::cos(r.phi);
    dir.sin_phi = std::sin(r.phi);
    dir.weight = weights[d];
    dir.chi.resize(k_.size());
    const auto row = static_cast<Eigen::Index>(r.row);
    for (std::size_t j = 0; j < k_.size(); ++j) {
      // chi(k) = int w(X) exp(i k X / len) dX over the unit-direction variable.
      const double kk = k_[j] / r.len;
      cplx sum = 0.0;
      for (int m = 0; m < family.x.count; ++m) {
        const double wt = (m == 0 || m == family.x.count - 1) ? 0.5 : 1.0;
        sum += wt * family.values(row, m) * std::polar(1.0, kk * family.x.at(m));
      }
      sum *= dx;
      dir.chi[j] = r.flip ? std::conj(sum) : sum;
    }
  });
}

double SymplecticInverter::operator()(double q, double p) const {
  double total = 0.0;
  for (const Direction& d : dirs_) {
    const double x = q * d.cos_phi + p * d.sin_phi;
    const cplx step = std::polar(1.0, -(k_.size() > 1 ? k_[1] : 0.0) * x);
    cplx phase = 1.0;
    double inner = 0.0;
    for (std::size_t j = 0; j < k_.size(); ++j) {
      inner += k_weight_[j] * (d.chi[j] * phase).real();
      phase *= step;
    }
    total += d.weight * inner;
  }
  return total / kPi;
}

double wigner_from_symplectic(const SymplecticFamily& family, double q, double p, double reg_s) {
  return SymplecticInverter(family, reg_s)(q, p);
}

WignerGrid wigner_from_symplectic(const SymplecticFamily& family, const UniformGrid& q,
                                  const UniformGrid& p, double reg_s) {
  const SymplecticInverter inv(family, reg_s);
  return sample_wigner([&inv](double qq, double pp) { return inv(qq, pp); }, q, p);
}

}  // namespace qopt::tomography

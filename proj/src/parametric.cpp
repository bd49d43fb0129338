#include "qopt/parametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "detail/ode.hpp"
#include "qopt/errors.hpp"

namespace qopt::parametric {

namespace {

constexpr std::string_view kModule = "parametric";
const cplx kI{0.0, 1.0};

EpsilonPoint closed_form(ProfileKind kind, double t) {
  switch (kind) {
    case ProfileKind::preset_free:
      return {t, cplx(1.0, t), kI, std::atan(t)};
    case ProfileKind::preset_oscillator:
      return {t, std::exp(kI * t), kI * std::exp(kI * t), t};
    case ProfileKind::preset_repulsive:
      return {t, cplx(std::cosh(t), std::sinh(t)), cplx(std::sinh(t), std::cosh(t)),
              std::atan(std::tanh(t))};
    default:
      raise(ErrorCode::internal, kModule, "solve_epsilon", "not a preset");
  }
}

double wronskian_error(const EpsilonPoint& p) {
  return std::abs(p.eps * std::conj(p.deps) - std::conj(p.eps) * p.deps + 2.0 * kI);
}

std::vector<EpsilonPoint> integrate(const FrequencyProfile& profile, const EpsilonPoint& start,
                                    const std::vector<double>& times, double tol,
                                    std::string_view op) {
  using State = std::vector<cplx>;
  auto rhs = [&profile](const State& x, State& dx, double t) {
    dx.resize(2);
    dx[0] = x[1];
    dx[1] = -profile.omega_squared(t) * x[0];
  };
  const auto states =
      detail::integrate_at_times(rhs, State{start.eps, start.deps}, times, tol, kModule, op);
  std::vector<EpsilonPoint> out;
  out.reserve(states.size());
  double phase = start.phase;
  cplx prev = start.eps;
  for (std::size_t k = 0; k < states.size(); ++k) {
    const cplx eps = states[k][0];
    if (eps == cplx(0.0)) {
      raise(ErrorCode::internal, kModule, op, "eps(t) vanished");
    }
    phase += std::arg(eps / prev);
    prev = eps;
    out.push_back({times[k], eps, states[k][1], phase});
  }
  return out;
}

// H_m(y) / sqrt(2^m m!) by the normalized three-term recursion.
double normalized_hermite(int m, double y) {
  double prev = 0.0;
  double cur = 1.0;
  for (int k = 0; k < m; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * y * cur - std::sqrt(double(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

// Common factor exp(-|alpha|^2/2 - eps* alpha^2 / (2 eps)).
cplx packet_factor(const EpsilonPoint& p, cplx alpha) {
  return std::exp(-0.5 * std::norm(alpha) - std::conj(p.eps) * alpha * alpha / (2.0 * p.eps));
}

}  // namespace

std::string to_string(ProfileKind kind) {
  switch (kind) {
    case ProfileKind::preset_free: return "free";
    case ProfileKind::preset_oscillator: return "oscillator";
    case ProfileKind::preset_repulsive: return "repulsive";
    case ProfileKind::tabulated: return "tabulated";
    case ProfileKind::expression: return "expression";
  }
  return "unknown";
}

FrequencyProfile FrequencyProfile::preset(ProfileKind kind) {
  if (kind == ProfileKind::tabulated || kind == ProfileKind::expression) {
    raise(ErrorCode::invalid_argument, kModule, "FrequencyProfile", "not a preset kind");
  }
  return FrequencyProfile(kind);
}

FrequencyProfile FrequencyProfile::preset(const std::string& name) {
  if (name == "free") return FrequencyProfile(ProfileKind::preset_free);
  if (name == "oscillator") return FrequencyProfile(ProfileKind::preset_oscillator);
  if (name == "repulsive") return FrequencyProfile(ProfileKind::preset_repulsive);
  raise(ErrorCode::invalid_argument, kModule, "FrequencyProfile",
        "unknown preset '" + name + "' (expected free, oscillator or repulsive)");
}

FrequencyProfile FrequencyProfile::tabulated(std::vector<std::pair<double, double>> table) {
  if (table.size() < 2) {
    raise(ErrorCode::invalid_argument, kModule, "FrequencyProfile",
          "table needs at least two rows");
  }
  for (std::size_t k = 0; k < table.size(); ++k) {
    if (!std::isfinite(table[k].first) || !std::isfinite(table[k].second)) {
      raise(ErrorCode::invalid_argument, kModule, "FrequencyProfile", "non-finite table entry");
    }
    if (k > 0 && !(table[k].first > table[k - 1].first)) {
      raise(ErrorCode::invalid_argument, kModule, "FrequencyProfile",
            "table times must be strictly increasing");
    }
  }
  if (table.front().first > 0.0) {
    raise(ErrorCode::invalid_argument, kModule, "FrequencyProfile", "table must start at t <= 0");
  }
  FrequencyProfile p(ProfileKind::tabulated);
  p.table_ = std::move(table);
  return p;
}

FrequencyProfile FrequencyProfile::expression(const std::string& text) {
  FrequencyProfile p(ProfileKind::expression);
  p.expr_ = std::make_shared<const Expression>(text);
  return p;
}

bool FrequencyProfile::is_preset() const {
  return kind_ != ProfileKind::tabulated && kind_ != ProfileKind::expression;
}

const std::string& FrequencyProfile::expression_text() const {
  static const std::string empty;
  return expr_ ? expr_->text() : empty;
}

double FrequencyProfile::t_max() const {
  return kind_ == ProfileKind::tabulated ? table_.back().first
                                         : std::numeric_limits<double>::infinity();
}

double FrequencyProfile::omega_squared(double t) const {
  switch (kind_) {
    case ProfileKind::preset_free: return 0.0;
    case ProfileKind::preset_oscillator: return 1.0;
    case ProfileKind::preset_repulsive: return -1.0;
    case ProfileKind::expression: return (*expr_)(t);
    case ProfileKind::tabulated: break;
  }
  if (t < table_.front().first || t > table_.back().first) {
    raise(ErrorCode::out_of_range, kModule, "omega_squared",
          "t=" + std::to_string(t) + " outside the tabulated range");
  }
  auto hi = std::upper_bound(table_.begin(), table_.end(), t,
                             [](double v, const auto& row) { return v < row.first; });
  if (hi == table_.end()) return table_.back().second;
  const auto lo = std::prev(hi);
  const double w = (t - lo->first) / (hi->first - lo->first);
  return (1.0 - w) * lo->second + w * hi->second;
}

EpsilonPoint EpsilonTrajectory::at(double t) const {
  if (!(t >= 0.0) || t > t_end()) {
    raise(ErrorCode::out_of_range, kModule, "trajectory_at",
          "t=" + std::to_string(t) + " outside [0, " + std::to_string(t_end()) + "]");
  }
  if (profile_.is_preset()) return closed_form(profile_.kind(), t);
  auto it = std::upper_bound(samples_.begin(), samples_.end(), t,
                             [](double v, const EpsilonPoint& s) { return v < s.t; });
  const EpsilonPoint& start = *std::prev(it);
  if (start.t == t) return start;
  return integrate(profile_, start, {start.t, t}, tol_, "trajectory_at").back();
}

EpsilonTrajectory solve_epsilon(const FrequencyProfile& profile, double t_end, double tol,
                                int n_intervals) {
  constexpr std::string_view op = "solve_epsilon";
  if (!(tol > 0.0)) raise(ErrorCode::invalid_argument, kModule, op, "tol must be positive");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    raise(ErrorCode::invalid_argument, kModule, op, "t_end must be finite and >= 0");
  }
  if (t_end > profile.t_max()) {
    raise(ErrorCode::out_of_range, kModule, op, "t_end exceeds the tabulated profile");
  }
  if (n_intervals < 0) raise(ErrorCode::invalid_argument, kModule, op, "n_intervals < 0");
  if (n_intervals == 0) n_intervals = std::max(1, static_cast<int>(std::ceil(t_end / 0.05)));

  std::vector<double> times(static_cast<std::size_t>(n_intervals) + 1);
  for (int k = 0; k <= n_intervals; ++k) {
    times[static_cast<std::size_t>(k)] = t_end * k / n_intervals;
  }
  times.back() = t_end;

  EpsilonTrajectory traj(profile, tol);
  if (profile.is_preset()) {
    for (double t : times) traj.samples_.push_back(closed_form(profile.kind(), t));
  } else if (t_end == 0.0) {
    traj.samples_.push_back({0.0, cplx(1.0), kI, 0.0});
  } else {
    traj.samples_ = integrate(profile, {0.0, cplx(1.0), kI, 0.0}, times, tol, op);
  }
  for (const auto& p : traj.samples_) {
    traj.wronskian_defect_ = std::max(traj.wronskian_defect_, wronskian_error(p));
  }
  return traj;
}

Variances variances_correlation(const EpsilonTrajectory& traj, double t) {
  const EpsilonPoint p = traj.at(t);
  Variances v;
  v.sigma_x = 0.5 * std::norm(p.eps);
  v.sigma_p = 0.5 * std::norm(p.deps);
  const double c = (std::conj(p.eps) * p.deps).real();
  const double r2 = std::max(0.0, 1.0 - 1.0 / (4.0 * v.sigma_x * v.sigma_p));
  v.r = c > 0.0 ? std::sqrt(r2) : (c < 0.0 ? -std::sqrt(r2) : 0.0);
  return v;
}

cplx squeeze_mu(const EpsilonPoint& p) {
  const cplx ec = std::conj(p.eps);
  const cplx dc = std::conj(p.deps);
  return (ec - kI * dc) / (2.0 * (ec + kI * dc));
}

double squeezed_vacuum_pnd(const EpsilonPoint& p, int n) {
  if (n < 0) {
    raise(ErrorCode::invalid_argument, kModule, "squeezed_vacuum_pnd", "n must be >= 0");
  }
  if (n % 2 == 1) return 0.0;
  const double mu2 = std::norm(squeeze_mu(p));
  double w = 2.0 / std::sqrt(std::norm(p.eps) + std::norm(p.deps) + 2.0);
  for (int m = 1; m <= n / 2; ++m) {
    w *= (2.0 * m) * (2.0 * m - 1.0) / (double(m) * m) * mu2;
  }
  return w;
}

double squeezed_vacuum_pnd(const EpsilonTrajectory& traj, double t, int n) {
  return squeezed_vacuum_pnd(traj.at(t), n);
}

gaussian::GaussianState squeezed_vacuum_state(const EpsilonPoint& p) {
  gaussian::PureGaussianSpec spec{MatrixXcd::Constant(1, 1, -kI * p.deps / (2.0 * p.eps)),
                                  VectorXcd::Zero(1)};
  return gaussian::from_pure_gaussian(spec);
}

cplx ground_wavefunction(const EpsilonPoint& p, double x) {
  const cplx inv_sqrt_eps = std::exp(-0.5 * kI * p.phase) / std::sqrt(std::abs(p.eps));
  return std::pow(kPi, -0.25) * inv_sqrt_eps * std::exp(kI * p.deps * x * x / (2.0 * p.eps));
}

cplx packet_wavefunction(const EpsilonPoint& p, cplx alpha, double x) {
  return ground_wavefunction(p, x) * packet_factor(p, alpha) *
         std::exp(std::sqrt(2.0) * alpha * x / p.eps);
}

cplx packet_wavefunction(const EpsilonTrajectory& traj, double t, cplx alpha, double x) {
  return packet_wavefunction(traj.at(t), alpha, x);
}

cplx squeezed_number_wavefunction(const EpsilonPoint& p, int level, double x) {
  if (level < 0) {
    raise(ErrorCode::invalid_argument, kModule, "squeezed_number_wavefunction",
          "level must be >= 0");
  }
  // (eps*/2eps)^{m/2} / sqrt(m!) H_m = e^{-i m phase} H_m / sqrt(2^m m!).
  return std::exp(-kI * double(level) * p.phase) *
         normalized_hermite(level, x / std::abs(p.eps)) * ground_wavefunction(p, x);
}

cplx squeezed_number_wavefunction(const EpsilonTrajectory& traj, double t, int level,
                                  double x) {
  return squeezed_number_wavefunction(traj.at(t), level, x);
}

cplx parametric_cat_wavefunction(const EpsilonPoint& p, cplx alpha, Parity parity, double x) {
  const double a2 = std::norm(alpha);
  const cplx arg = std::sqrt(2.0) * alpha * x / p.eps;
  // 2 N exp(-|alpha|^2/2) = 1/sqrt(cosh|alpha|^2) or 1/sqrt(sinh|alpha|^2).
  const cplx shape = std::exp(-std::conj(p.eps) * alpha * alpha / (2.0 * p.eps));
  if (parity == Parity::even) {
    return ground_wavefunction(p, x) * shape * std::cosh(arg) / std::sqrt(std::cosh(a2));
  }
  if (a2 == 0.0) {
    raise(ErrorCode::invalid_argument, kModule, "parametric_cat_wavefunction",
          "odd state requires alpha != 0");
  }
  return ground_wavefunction(p, x) * shape * std::sinh(arg) / std::sqrt(std::sinh(a2));
}

cplx parametric_cat_wavefunction(const EpsilonTrajectory& traj, double t, cplx alpha,
                                 Parity parity, double x) {
  return parametric_cat_wavefunction(traj.at(t), alpha, parity, x);
}

cplx apply_integral_of_motion(const EpsilonPoint& p, const std::function<cplx(double)>& psi,
                              double x, double h) {
  const cplx d = (psi(x + h) - psi(x - h)) / (2.0 * h);
  return (p.eps * d - kI * p.deps * x * psi(x)) / std::sqrt(2.0);
}

}  // namespace qopt::parametric

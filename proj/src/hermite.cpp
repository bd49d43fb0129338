#include "qopt/hermite.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qopt/errors.hpp"

namespace qopt::hermite {

namespace {

constexpr std::string_view kModule = "hermite";
constexpr double kSymmetryTolerance = 1e-12;
constexpr double kDegenerateRcond = 1e-12;

MatrixXcd checked_symmetric(const MatrixXcd& r, std::string_view op) {
  if (r.rows() != r.cols() || r.rows() < 1) {
    raise(ErrorCode::dimension_mismatch, kModule, op,
          "matrix must be square with dimension >= 1");
  }
  const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
  if (linalg::asymmetry(r) > kSymmetryTolerance * scale) {
    raise(ErrorCode::invalid_argument, kModule, op,
          "matrix is not symmetric (asymmetry " +
              std::to_string(linalg::asymmetry(r)) + ")");
  }
  return 0.5 * (r + r.transpose());
}

// Visits every length-s vector of nonnegative integers summing to total.
template <typename F>
void for_each_composition(std::vector<int>& k, std::size_t pos, int remaining,
                          F&& visit) {
  if (pos + 1 == k.size()) {
    k[pos] = remaining;
    visit(k);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    k[pos] = v;
    for_each_composition(k, pos + 1, remaining - v, visit);
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_) {
    if (e < 0) {
      raise(ErrorCode::invalid_argument, kModule, "MultiIndex",
            "multi-index entries must be nonnegative");
    }
  }
  total_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex MultiIndex::concat(const MultiIndex& tail) const {
  std::vector<int> all = entries_;
  all.insert(all.end(), tail.entries_.begin(), tail.entries_.end());
  return MultiIndex(std::move(all));
}

double MultiIndex::factorial() const {
  double f = 1.0;
  for (int e : entries_) f *= std::tgamma(e + 1.0);
  return f;
}

HermiteParams::HermiteParams(MatrixXcd r, VectorXcd y) {
  r_ = checked_symmetric(r, "HermiteParams");
  if (y.size() != r_.rows()) {
    raise(ErrorCode::dimension_mismatch, kModule, "HermiteParams",
          "argument length does not match matrix dimension");
  }
  ry_ = r_ * y;
  y_ = std::move(y);
}

HermiteParams HermiteParams::from_linear_term(MatrixXcd r, VectorXcd ry) {
  HermiteParams p;
  p.r_ = checked_symmetric(r, "HermiteParams");
  if (ry.size() != p.r_.rows()) {
    raise(ErrorCode::dimension_mismatch, kModule, "HermiteParams",
          "linear term length does not match matrix dimension");
  }
  p.ry_ = std::move(ry);
  if (linalg::rcond(p.r_) >= kDegenerateRcond) {
    p.y_ = p.r_.partialPivLu().solve(p.ry_);
  }
  return p;
}

cplx hermite1d(int n, cplx t) {
  if (n < 0) {
    raise(ErrorCode::invalid_argument, kModule, "hermite1d", "negative order");
  }
  cplx prev{1.0, 0.0};
  if (n == 0) return prev;
  cplx cur = 2.0 * t;
  for (int k = 1; k < n; ++k) {
    cplx next = 2.0 * t * cur - 2.0 * static_cast<double>(k) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

cplx fock_wavefunction(int n, double q, double scale) {
  if (n < 0) {
    raise(ErrorCode::invalid_argument, kModule, "fock_wavefunction",
          "negative order");
  }
  if (!(scale > 0.0)) {
    raise(ErrorCode::invalid_argument, kModule, "fock_wavefunction",
          "scale must be positive");
  }
  // Normalized recursion psi_{k+1} = sqrt(2/(k+1)) x psi_k - sqrt(k/(k+1)) psi_{k-1}.
  const double x = q * std::sqrt(scale);
  double prev = std::pow(scale / kPi, 0.25) * std::exp(-0.5 * x * x);
  if (n == 0) return prev;
  double cur = std::sqrt(2.0) * x * prev;
  for (int k = 1; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur -
                        std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

HermiteBox::HermiteBox(const HermiteParams& params, std::vector<int> extents,
                       bool scaled, std::size_t index_cap)
    : extents_(std::move(extents)), scaled_(scaled) {
  const auto dim = static_cast<std::size_t>(params.dimension());
  if (extents_.size() != dim) {
    raise(ErrorCode::dimension_mismatch, kModule, "mv_hermite",
          "multi-index length " + std::to_string(extents_.size()) +
              " does not match dimension " + std::to_string(dim));
  }
  strides_.assign(dim, 1);
  double total = 1.0;
  for (std::size_t i = 0; i < dim; ++i) {
    if (extents_[i] < 0) {
      raise(ErrorCode::invalid_argument, kModule, "mv_hermite",
            "negative multi-index entry");
    }
    total *= extents_[i] + 1.0;
  }
  if (total > static_cast<double>(index_cap)) {
    raise(ErrorCode::resource_limit, kModule, "mv_hermite",
          "index box of " + std::to_string(total) + " entries exceeds cap " +
              std::to_string(index_cap));
  }
  for (std::size_t i = dim; i-- > 1;) {
    strides_[i - 1] = strides_[i] * static_cast<std::size_t>(extents_[i] + 1);
  }
  const auto count = static_cast<std::size_t>(total);
  values_.assign(count, cplx{0.0, 0.0});
  values_[0] = 1.0;

  const MatrixXcd& r = params.matrix();
  const VectorXcd& z = params.linear_term();
  std::vector<int> k(dim, 0);
  for (std::size_t off = 1; off < count; ++off) {
    // Advance the mixed-radix counter (last index fastest).
    for (std::size_t i = dim; i-- > 0;) {
      if (++k[i] <= extents_[i]) break;
      k[i] = 0;
    }
    std::size_t j = dim;
    while (k[--j] == 0) {
    }
    const std::size_t prev = off - strides_[j];
    const int pj = k[j] - 1;  // degree of the predecessor in direction j
    cplx acc = z(static_cast<Eigen::Index>(j)) * values_[prev];
    for (std::size_t l = 0; l < dim; ++l) {
      const int pl = (l == j) ? pj : k[l];
      if (pl == 0) continue;
      const cplx rjl = r(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
      const double w = scaled_ ? std::sqrt(static_cast<double>(pl))
                               : static_cast<double>(pl);
      acc -= rjl * w * values_[prev - strides_[l]];
    }
    values_[off] = scaled_ ? acc / std::sqrt(static_cast<double>(pj + 1)) : acc;
  }
}

std::size_t HermiteBox::offset(std::span<const int> k) const {
  if (k.size() != extents_.size()) {
    raise(ErrorCode::dimension_mismatch, kModule, "HermiteBox::at",
          "multi-index length mismatch");
  }
  std::size_t off = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (k[i] < 0 || k[i] > extents_[i]) {
      raise(ErrorCode::out_of_range, kModule, "HermiteBox::at",
            "multi-index outside the computed box");
    }
    off += strides_[i] * static_cast<std::size_t>(k[i]);
  }
  return off;
}

cplx HermiteBox::at(std::span<const int> k) const { return values_[offset(k)]; }

cplx mv_hermite(const HermiteParams& params, const MultiIndex& n) {
  if (n.size() != static_cast<std::size_t>(params.dimension())) {
    raise(ErrorCode::dimension_mismatch, kModule, "mv_hermite",
          "multi-index length does not match dimension");
  }
  HermiteBox box(params, n.entries(), false);
  return box.at(n);
}

cplx HermiteTable::at(const MultiIndex& n) const {
  auto it = values_.find(n);
  if (it == values_.end()) {
    raise(ErrorCode::out_of_range, kModule, "mv_hermite_table",
          "multi-index not in table");
  }
  return it->second;
}

HermiteTable mv_hermite_table(const HermiteParams& params, int max_total_degree,
                              std::size_t index_cap) {
  if (max_total_degree < 0) {
    raise(ErrorCode::invalid_argument, kModule, "mv_hermite_table",
          "max_total_degree must be >= 0");
  }
  const int dim = params.dimension();
  const double count = binomial(max_total_degree + dim, dim);
  if (count > static_cast<double>(index_cap)) {
    raise(ErrorCode::resource_limit, kModule, "mv_hermite_table",
          "table of " + std::to_string(count) + " entries exceeds cap " +
              std::to_string(index_cap));
  }
  HermiteTable table;
  table.max_degree_ = max_total_degree;
  const MatrixXcd& r = params.matrix();
  const VectorXcd& z = params.linear_term();
  auto& values = table.values_;
  values.emplace(MultiIndex::zeros(static_cast<std::size_t>(dim)), cplx{1.0, 0.0});
  std::vector<int> k(static_cast<std::size_t>(dim), 0);
  for (int degree = 1; degree <= max_total_degree; ++degree) {
    for_each_composition(k, 0, degree, [&](const std::vector<int>& idx) {
      int j = 0;
      while (idx[static_cast<std::size_t>(j)] == 0) ++j;
      std::vector<int> p = idx;
      --p[static_cast<std::size_t>(j)];
      cplx acc = z(j) * values.at(MultiIndex(p));
      for (int l = 0; l < dim; ++l) {
        const int pl = p[static_cast<std::size_t>(l)];
        if (pl == 0) continue;
        std::vector<int> q = p;
        --q[static_cast<std::size_t>(l)];
        acc -= r(j, l) * static_cast<double>(pl) * values.at(MultiIndex(q));
      }
      values.emplace(MultiIndex(idx), acc);
    });
  }
  return table;
}

HermiteParams overlap_hermite_params(const OverlapSpec& spec) {
  constexpr std::string_view op = "gaussian_hermite_overlap";
  const Eigen::Index n = spec.m.rows();
  if (spec.m.cols() != n || spec.R.rows() != n || spec.R.cols() != n ||
      spec.r.rows() != n || spec.r.cols() != n || spec.lambda.rows() != n ||
      spec.lambda.cols() != n || spec.c.size() != n || spec.d.size() != n ||
      n < 1) {
    raise(ErrorCode::dimension_mismatch, kModule, op,
          "overlap ingredients must share dimension N >= 1");
  }
  const MatrixXcd big_r = checked_symmetric(spec.R, op);
  const MatrixXcd small_r = checked_symmetric(spec.r, op);
  const MatrixXcd m = checked_symmetric(spec.m, op);
  if (!linalg::positive_definite(m.real())) {
    raise(ErrorCode::degenerate_overlap, kModule, op,
          "Re(m) is not positive definite; the Gaussian integral diverges");
  }
  const MatrixXcd m_inv = m.inverse();
  const MatrixXcd rl = small_r * spec.lambda;

  MatrixXcd rho(2 * n, 2 * n);
  rho.topLeftCorner(n, n) = big_r - 0.5 * big_r * m_inv * big_r;
  rho.bottomRightCorner(n, n) =
      small_r - 0.5 * rl * m_inv * spec.lambda.transpose() * small_r;
  rho.bottomLeftCorner(n, n) = -0.5 * rl * m_inv * big_r;
  rho.topRightCorner(n, n) = rho.bottomLeftCorner(n, n).transpose();

  VectorXcd z(2 * n);
  z.head(n) = 0.5 * big_r * m_inv * spec.c;
  z.tail(n) = 0.5 * rl * m_inv * spec.c + small_r * spec.d;
  return HermiteParams::from_linear_term(std::move(rho), std::move(z));
}

cplx gaussian_hermite_overlap(const OverlapSpec& spec, const MultiIndex& n,
                              const MultiIndex& m_idx) {
  const auto dim = static_cast<std::size_t>(spec.m.rows());
  if (n.size() != dim || m_idx.size() != dim) {
    raise(ErrorCode::dimension_mismatch, kModule, "gaussian_hermite_overlap",
          "multi-index lengths must equal N");
  }
  const HermiteParams params = overlap_hermite_params(spec);
  const MatrixXcd m = 0.5 * (spec.m + spec.m.transpose());
  const cplx prefactor =
      std::pow(kPi, 0.5 * static_cast<double>(dim)) * linalg::inverse_sqrt_det(m) *
      std::exp(0.25 * (spec.c.transpose() * m.inverse() * spec.c).value());
  return prefactor * mv_hermite(params, n.concat(m_idx));
}

}  // namespace qopt::hermite

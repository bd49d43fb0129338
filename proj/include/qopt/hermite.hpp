#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "qopt/linalg.hpp"

namespace qopt::hermite {

/// Nonnegative multi-index n = (n_1, ..., n_S).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  MultiIndex(std::initializer_list<int> entries)
      : MultiIndex(std::vector<int>(entries)) {}

  static MultiIndex zeros(std::size_t size) {
    return MultiIndex(std::vector<int>(size, 0));
  }

  std::size_t size() const { return entries_.size(); }
  int operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<int>& entries() const { return entries_; }
  int total_degree() const { return total_; }

  /// Concatenation (a, b), used for the duplicated index (n, n).
  MultiIndex concat(const MultiIndex& tail) const;

  /// n! = n_1! n_2! ... n_S!
  double factorial() const;

  auto operator<=>(const MultiIndex&) const = default;

 private:
  std::vector<int> entries_;
  int total_ = 0;
};

/// Parameters of H_n^{R}(y): symmetric complex matrix R and argument y.
///
/// The family is defined by the generating function
///   exp(-a R a / 2 + a R y) = sum_n H_n^{R}(y) a^n / n!,
/// which reduces to the classical H_n(t) for R = [[2]], y = [t]. Only the
/// product z = R y enters the recursion, so parameters can also be built
/// directly from z; y is then known only when R is invertible.
class HermiteParams {
 public:
  HermiteParams(MatrixXcd r, VectorXcd y);

  static HermiteParams from_linear_term(MatrixXcd r, VectorXcd ry);

  int dimension() const { return static_cast<int>(r_.rows()); }
  const MatrixXcd& matrix() const { return r_; }
  const VectorXcd& linear_term() const { return ry_; }
  const std::optional<VectorXcd>& argument() const { return y_; }

 private:
  HermiteParams() = default;
  MatrixXcd r_;
  VectorXcd ry_;
  std::optional<VectorXcd> y_;
};

/// Classical Hermite polynomial (physicists' convention).
cplx hermite1d(int n, cplx t);

/// Number-state wavefunction psi_n(q) with scale = m omega / hbar.
cplx fock_wavefunction(int n, double q, double scale);

cplx mv_hermite(const HermiteParams& params, const MultiIndex& n);

/// Every H_n with total degree <= max_total_degree.
class HermiteTable {
 public:
  int max_total_degree() const { return max_degree_; }
  std::size_t size() const { return values_.size(); }
  cplx at(const MultiIndex& n) const;
  const std::map<MultiIndex, cplx>& values() const { return values_; }

 private:
  friend HermiteTable mv_hermite_table(const HermiteParams&, int, std::size_t);
  int max_degree_ = 0;
  std::map<MultiIndex, cplx> values_;
};

inline constexpr std::size_t kDefaultIndexCap = std::size_t{1} << 24;

HermiteTable mv_hermite_table(const HermiteParams& params, int max_total_degree,
                              std::size_t index_cap = kDefaultIndexCap);

/// Dense table over the box 0 <= k_i <= extent_i holding either H_k or the
/// scaled values H_k / sqrt(k!). The scaled recursion
///   h_{k+e_j} sqrt(k_j + 1) = z_j h_k - sum_l R_jl sqrt(k_l) h_{k-e_l}
/// stays in range for the large degrees photon statistics need.
class HermiteBox {
 public:
  HermiteBox(const HermiteParams& params, std::vector<int> extents,
             bool scaled, std::size_t index_cap = kDefaultIndexCap);

  bool scaled() const { return scaled_; }
  const std::vector<int>& extents() const { return extents_; }
  std::size_t size() const { return values_.size(); }
  cplx at(std::span<const int> k) const;
  cplx at(const MultiIndex& k) const { return at(std::span<const int>(k.entries())); }

 private:
  std::size_t offset(std::span<const int> k) const;
  std::vector<int> extents_;
  std::vector<std::size_t> strides_;
  std::vector<cplx> values_;
  bool scaled_;
};

/// Ingredients of the Gaussian overlap of two Hermite polynomials:
///   int H_n^{R}(x) H_m^{r}(Lambda x + d) exp(-x m x + c x) dx.
struct OverlapSpec {
  MatrixXcd R;
  MatrixXcd r;
  MatrixXcd lambda;
  VectorXcd d;
  VectorXcd c;
  MatrixXcd m;
};

/// The 2N-dimensional Hermite parameters (rho, rho y) of the overlap formula.
HermiteParams overlap_hermite_params(const OverlapSpec& spec);

/// Closed form pi^{N/2} (det m)^{-1/2} exp(c m^{-1} c / 4) H_{(n, m_idx)}^{rho}(y).
cplx gaussian_hermite_overlap(const OverlapSpec& spec, const MultiIndex& n,
                              const MultiIndex& m_idx);

}  // namespace qopt::hermite

#pragma once

#include <vector>

#include "wnpi/common.hpp"

namespace wnpi {

/// Truncated chaos expansion with explicit symmetric kernels phi^(0..n_max)
/// over an m-dimensional space. The order-n kernel is stored flattened in
/// row-major multi-index order (size m^n).
class DenseChaos {
 public:
  static constexpr int kMaxDim = 12;
  static constexpr int kMaxOrder = 4;

  DenseChaos(int dim, int n_max);

  int dim() const { return dim_; }
  int n_max() const { return n_max_; }

  Vec& kernel(int n);
  const Vec& kernel(int n) const;

  /// Replaces every kernel by its average over index permutations.
  void symmetrize();
  bool is_symmetric(double tol = 1e-12) const;

 private:
  int dim_;
  int n_max_;
  std::vector<Vec> kernels_;
};

struct CoherentTerm {
  cplx w;
  Vec xi;  // coordinates in the orthonormal basis
};

/// Finite combination sum_j w_j :exp(<xi_j, .>): of Wick exponentials.
class CoherentChaos {
 public:
  explicit CoherentChaos(int dim) : dim_(dim) {}
  CoherentChaos(int dim, std::vector<CoherentTerm> terms);

  int dim() const { return dim_; }
  const std::vector<CoherentTerm>& terms() const { return terms_; }
  void add(cplx w, Vec xi);

  /// Pointwise product, via :e^<a,.>: :e^<b,.>: = e^<a,b> :e^<a+b,.>:.
  friend CoherentChaos operator*(const CoherentChaos& a, const CoherentChaos& b);

 private:
  int dim_;
  std::vector<CoherentTerm> terms_;
};

namespace tensor {

/// Flattened size m^n.
Eigen::Index size(int m, int n);

/// Average of t over all permutations of its n index slots.
Vec symmetrize(const Vec& t, int m, int n);

/// a (order p) tensor b (order q), indices of a first.
Vec outer(const Vec& a, const Vec& b);

/// Contracts the last two slots of an order-n tensor with c:
/// out[i] = sum_ab t[i, a, b] c(a, b).
Vec contract_last_pair(const Vec& t, int m, int n, const Mat& c);

/// (b tensor ... tensor b) applied to every slot of an order-n tensor.
Vec apply_each(const Vec& t, int m, int n, const Mat& b);

/// Order-n symmetric power xi^{tensor n}.
Vec power(const Vec& xi, int n);

/// Plain contraction of two order-n tensors (no conjugation).
cplx pair(const Vec& a, const Vec& b);

}  // namespace tensor

}  // namespace wnpi

#pragma once

#include <vector>

#include "wnpi/grid.hpp"

namespace wnpi {

using Symbol = Eigen::Matrix2cd;

enum class Block { xx, xp, px, pp };

/// 2x2 block operator on PhaseFunctions over one grid.
///
/// Two storage forms: a diagonal symbol (one 2x2 matrix per node, acting
/// pointwise as a multiplication operator) or a dense 2n x 2n matrix in the
/// stacked [x; p] ordering. The matrix acts on cell values; because the grid
/// is uniform it is also the matrix in the orthonormal cell basis, so
/// <f, B g> = dt * f^T W g and bilinear symmetry means W = W^T.
class BlockOperator {
 public:
  enum class Structure { symbol, dense };

  static BlockOperator identity(const TimeGrid& grid);
  static BlockOperator zero(const TimeGrid& grid);
  static BlockOperator from_symbols(const TimeGrid& grid, std::vector<Symbol> symbols);
  static BlockOperator from_dense(const TimeGrid& grid, Mat matrix);
  static BlockOperator from_blocks(const TimeGrid& grid, const Mat& xx, const Mat& xp,
                                   const Mat& px, const Mat& pp);

  const TimeGrid& grid() const { return grid_; }
  Structure structure() const { return structure_; }
  bool is_symbol() const { return structure_ == Structure::symbol; }

  /// Per-node symbols; throws for dense operators.
  const std::vector<Symbol>& symbols() const;
  /// Per-node 2x2 symbol; for dense operators, the diagonal entries of each block.
  Symbol symbol(int node) const;
  /// Dense 2n x 2n matrix; symbols are expanded.
  Mat dense() const;
  Mat block(Block b) const;

  PhaseFunction apply(const PhaseFunction& f) const;
  BlockOperator transpose() const;
  bool is_symmetric(double tol = 1e-12) const;

  friend BlockOperator operator+(const BlockOperator& a, const BlockOperator& b);
  friend BlockOperator operator-(const BlockOperator& a, const BlockOperator& b);
  friend BlockOperator operator*(const BlockOperator& a, const BlockOperator& b);
  friend BlockOperator operator*(cplx s, const BlockOperator& a);

 private:
  BlockOperator(const TimeGrid& grid, Structure s) : grid_(grid), structure_(s) {}

  TimeGrid grid_;
  Structure structure_;
  std::vector<Symbol> symbols_;
  Mat dense_;
};

/// Kinetic matrix of the phase-space free action; symbol
/// [[-1, -i], [-i, -(1 - i)]] on nodes in [0, t), zero elsewhere.
BlockOperator kinetic_K(const TimeGrid& grid, double t);

/// Covariance of the free integrand: i [[1, 1], [1, 0]] on [0, t), the
/// identity on [t, T).
BlockOperator free_N_inv(const TimeGrid& grid, double t);

/// Symmetric square root R of free_N_inv, built per node by spectral
/// decomposition of [[1, 1], [1, 0]] and principal roots of i * lambda.
BlockOperator sqrt_R(const TimeGrid& grid, double t);

/// Harmonic-oscillator potential block [[i k A, 0], [0, 0]] with A the
/// double Volterra operator.
BlockOperator volterra_ho(const TimeGrid& grid, double t, double k);

/// Inverse; rejects operators whose reciprocal condition estimate is below 1e-12.
BlockOperator invert(const BlockOperator& op);

/// det(Id + L (Id + K)^{-1}).
cplx det_rel(const BlockOperator& K, const BlockOperator& L);

/// log det(Id + L (Id + K)^{-1}) as log det(N) - log det(Id + K) with
/// N = Id + K + L, each on the continued (damping) branch.
cplx log_det_rel(const BlockOperator& K, const BlockOperator& L);

/// log det of a block operator on the continued branch (see linalg).
cplx log_det(const BlockOperator& op);

/// Reciprocal condition estimate; the minimum over nodes for symbols.
double rcond(const BlockOperator& op);

/// Max-norm distance between two operators.
double max_abs_diff(const BlockOperator& a, const BlockOperator& b);

}  // namespace wnpi

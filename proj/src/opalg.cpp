#include "wnpi/opalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "wnpi/linalg.hpp"

namespace wnpi {

namespace {

constexpr double kInvertThreshold = 1e-12;

Mat expand(const TimeGrid& grid, const std::vector<Symbol>& symbols) {
  const int n = grid.n();
  Mat m = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    m(i, i) = symbols[i](0, 0);
    m(i, n + i) = symbols[i](0, 1);
    m(n + i, i) = symbols[i](1, 0);
    m(n + i, n + i) = symbols[i](1, 1);
  }
  return m;
}

double rcond2(const Symbol& s) { return linalg::rcond(Mat(s)); }

}  // namespace

BlockOperator BlockOperator::identity(const TimeGrid& grid) {
  return from_symbols(grid, std::vector<Symbol>(grid.n(), Symbol::Identity()));
}

BlockOperator BlockOperator::zero(const TimeGrid& grid) {
  return from_symbols(grid, std::vector<Symbol>(grid.n(), Symbol::Zero()));
}

BlockOperator BlockOperator::from_symbols(const TimeGrid& grid, std::vector<Symbol> symbols) {
  if (static_cast<int>(symbols.size()) != grid.n()) {
    throw InputError("block operator: one symbol per node required");
  }
  BlockOperator op(grid, Structure::symbol);
  op.symbols_ = std::move(symbols);
  return op;
}

BlockOperator BlockOperator::from_dense(const TimeGrid& grid, Mat matrix) {
  if (matrix.rows() != 2 * grid.n() || matrix.cols() != 2 * grid.n()) {
    throw InputError("block operator: dense matrix must be 2n x 2n");
  }
  if (!matrix.allFinite()) throw InputError("block operator: non-finite entry");
  BlockOperator op(grid, Structure::dense);
  op.dense_ = std::move(matrix);
  return op;
}

BlockOperator BlockOperator::from_blocks(const TimeGrid& grid, const Mat& xx, const Mat& xp,
                                         const Mat& px, const Mat& pp) {
  const int n = grid.n();
  for (const Mat* b : {&xx, &xp, &px, &pp}) {
    if (b->rows() != n || b->cols() != n) throw InputError("block operator: blocks must be n x n");
  }
  Mat m(2 * n, 2 * n);
  m << xx, xp, px, pp;
  return from_dense(grid, std::move(m));
}

const std::vector<Symbol>& BlockOperator::symbols() const {
  if (!is_symbol()) throw InputError("block operator: dense operator has no symbols");
  return symbols_;
}

Symbol BlockOperator::symbol(int node) const {
  if (node < 0 || node >= grid_.n()) throw InputError("block operator: node out of range");
  if (is_symbol()) return symbols_[node];
  const int n = grid_.n();
  Symbol s;
  s << dense_(node, node), dense_(node, n + node), dense_(n + node, node),
      dense_(n + node, n + node);
  return s;
}

Mat BlockOperator::dense() const { return is_symbol() ? expand(grid_, symbols_) : dense_; }

Mat BlockOperator::block(Block b) const {
  const int n = grid_.n();
  const Mat d = dense();
  switch (b) {
    case Block::xx: return d.topLeftCorner(n, n);
    case Block::xp: return d.topRightCorner(n, n);
    case Block::px: return d.bottomLeftCorner(n, n);
    case Block::pp: return d.bottomRightCorner(n, n);
  }
  return {};
}

PhaseFunction BlockOperator::apply(const PhaseFunction& f) const {
  require_same_grid(grid_, f.grid());
  if (!is_symbol()) return PhaseFunction::from_stacked(grid_, dense_ * f.stacked());
  const int n = grid_.n();
  Vec x(n), p(n);
  for (int i = 0; i < n; ++i) {
    const auto& s = symbols_[i];
    x[i] = s(0, 0) * f.x_part()[i] + s(0, 1) * f.p_part()[i];
    p[i] = s(1, 0) * f.x_part()[i] + s(1, 1) * f.p_part()[i];
  }
  return PhaseFunction(grid_, std::move(x), std::move(p));
}

BlockOperator BlockOperator::transpose() const {
  if (!is_symbol()) return from_dense(grid_, dense_.transpose());
  std::vector<Symbol> out(symbols_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = symbols_[i].transpose();
  return from_symbols(grid_, std::move(out));
}

bool BlockOperator::is_symmetric(double tol) const {
  if (is_symbol()) {
    for (const auto& s : symbols_) {
      if (std::abs(s(0, 1) - s(1, 0)) > tol * std::max(1.0, s.cwiseAbs().maxCoeff())) return false;
    }
    return true;
  }
  return linalg::is_symmetric(dense_, tol);
}

BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) {
  require_same_grid(a.grid_, b.grid_);
  if (a.is_symbol() && b.is_symbol()) {
    std::vector<Symbol> out(a.symbols_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.symbols_[i] + b.symbols_[i];
    return BlockOperator::from_symbols(a.grid_, std::move(out));
  }
  return BlockOperator::from_dense(a.grid_, a.dense() + b.dense());
}

BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) {
  return a + cplx(-1.0) * b;
}

BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) {
  require_same_grid(a.grid_, b.grid_);
  if (a.is_symbol() && b.is_symbol()) {
    std::vector<Symbol> out(a.symbols_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a.symbols_[i] * b.symbols_[i];
    return BlockOperator::from_symbols(a.grid_, std::move(out));
  }
  return BlockOperator::from_dense(a.grid_, a.dense() * b.dense());
}

BlockOperator operator*(cplx s, const BlockOperator& a) {
  if (a.is_symbol()) {
    std::vector<Symbol> out(a.symbols_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a.symbols_[i];
    return BlockOperator::from_symbols(a.grid_, std::move(out));
  }
  return BlockOperator::from_dense(a.grid_, s * a.dense_);
}

BlockOperator kinetic_K(const TimeGrid& grid, double t) {
  require_in_window(grid, t);
  Symbol inside;
  inside << -1.0, -kI, -kI, -(1.0 - kI);
  std::vector<Symbol> symbols(grid.n(), Symbol::Zero());
  const int active = grid.cells_below(t);
  for (int i = 0; i < active; ++i) symbols[i] = inside;
  return BlockOperator::from_symbols(grid, std::move(symbols));
}

BlockOperator free_N_inv(const TimeGrid& grid, double t) {
  require_in_window(grid, t);
  Symbol inside;
  inside << kI, kI, kI, 0.0;
  std::vector<Symbol> symbols(grid.n(), Symbol::Identity());
  const int active = grid.cells_below(t);
  for (int i = 0; i < active; ++i) symbols[i] = inside;
  return BlockOperator::from_symbols(grid, std::move(symbols));
}

BlockOperator sqrt_R(const TimeGrid& grid, double t) {
  require_in_window(grid, t);
  Eigen::Matrix2d m;
  m << 1.0, 1.0, 1.0, 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const Eigen::Matrix2cd p = es.eigenvectors().cast<cplx>();
  Eigen::Matrix2cd root_diag = Eigen::Matrix2cd::Zero();
  for (int j = 0; j < 2; ++j) root_diag(j, j) = std::sqrt(kI * es.eigenvalues()[j]);
  const Symbol inside = p * root_diag * p.transpose();

  std::vector<Symbol> symbols(grid.n(), Symbol::Identity());
  const int active = grid.cells_below(t);
  for (int i = 0; i < active; ++i) symbols[i] = inside;
  return BlockOperator::from_symbols(grid, std::move(symbols));
}

BlockOperator volterra_ho(const TimeGrid& grid, double t, double k) {
  const int n = grid.n();
  const Mat a = volterra_A(grid, t).cast<cplx>();
  const Mat z = Mat::Zero(n, n);
  return BlockOperator::from_blocks(grid, kI * k * a, z, z, z);
}

double rcond(const BlockOperator& op) {
  if (!op.is_symbol()) return linalg::rcond(op.dense());
  double worst = 1.0;
  for (const auto& s : op.symbols()) worst = std::min(worst, rcond2(s));
  return worst;
}

BlockOperator invert(const BlockOperator& op) {
  const double r = rcond(op);
  if (!(r >= kInvertThreshold)) throw SingularError("invert: operator is singular", r);
  if (!op.is_symbol()) return BlockOperator::from_dense(op.grid(), op.dense().inverse());
  std::vector<Symbol> out;
  out.reserve(op.symbols().size());
  for (const auto& s : op.symbols()) out.push_back(s.inverse());
  return BlockOperator::from_symbols(op.grid(), std::move(out));
}

cplx det_rel(const BlockOperator& K, const BlockOperator& L) {
  require_same_grid(K.grid(), L.grid());
  const BlockOperator id = BlockOperator::identity(K.grid());
  const BlockOperator inv = invert(id + K);
  cplx d = 1.0;
  if (K.is_symbol() && L.is_symbol()) {
    // block-diagonal: product of 2x2 determinants
    const auto& ls = L.symbols();
    const auto& is = inv.symbols();
    for (std::size_t i = 0; i < ls.size(); ++i) {
      d *= (Symbol::Identity() + ls[i] * is[i]).determinant();
    }
  } else {
    const Mat m = Mat::Identity(2 * K.grid().n(), 2 * K.grid().n()) + L.dense() * inv.dense();
    d = linalg::det(m);
  }
  if (!(std::abs(d) >= 1e-300)) throw MathError("det_rel: determinant vanishes (|det| < 1e-300)");
  return d;
}

cplx log_det(const BlockOperator& op) {
  if (!op.is_symbol()) return linalg::log_det_continued(op.dense());
  cplx acc = 0.0;
  for (const auto& s : op.symbols()) acc += linalg::log_det_continued(Mat(s));
  return acc;
}

cplx log_det_rel(const BlockOperator& K, const BlockOperator& L) {
  require_same_grid(K.grid(), L.grid());
  const BlockOperator id = BlockOperator::identity(K.grid());
  const BlockOperator one_plus_k = id + K;
  const double r = rcond(one_plus_k);
  if (!(r >= kInvertThreshold)) throw SingularError("det_rel: Id + K is singular", r);
  return log_det(one_plus_k + L) - log_det(one_plus_k);
}

double max_abs_diff(const BlockOperator& a, const BlockOperator& b) {
  require_same_grid(a.grid(), b.grid());
  if (a.is_symbol() && b.is_symbol()) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.symbols().size(); ++i) {
      worst = std::max(worst, (a.symbols()[i] - b.symbols()[i]).cwiseAbs().maxCoeff());
    }
    return worst;
  }
  return linalg::max_abs(a.dense() - b.dense());
}

}  // namespace wnpi

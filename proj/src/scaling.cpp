#include "wnpi/scaling.hpp"

#include <cmath>

namespace wnpi {

namespace {

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void require_square(const Mat& B, int m) {
  if (B.rows() != m || B.cols() != m) throw InputError("scaling: B must be m x m");
}

cplx bilinear(const Vec& a, const Vec& b) { return (a.transpose() * b)(0, 0); }

}  // namespace

Mat trace_kernel(const Mat& B) {
  if (B.rows() != B.cols()) throw InputError("trace kernel: B must be square");
  const Eigen::Index m = B.rows();
  Mat t = Mat::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    // (B e_i) (x) e_i
    t.col(i) += B.col(i);
  }
  return t;
}

Mat trace_kernel(const BlockOperator& B) { return trace_kernel(B.dense()); }

DenseChaos sigma_dense(const Mat& B, const DenseChaos& phi) {
  const int m = phi.dim();
  require_square(B, m);
  if (!phi.is_symmetric()) throw InputError("sigma_dense: kernels must be symmetric");
  const Mat bt = B.transpose();
  const Mat c = trace_kernel(Mat(Mat::Identity(m, m) - B * bt));

  DenseChaos out(m, phi.n_max());
  for (int n = 0; n <= phi.n_max(); ++n) {
    Vec acc = Vec::Zero(tensor::size(m, n));
    for (int k = 0; n + 2 * k <= phi.n_max(); ++k) {
      Vec t = phi.kernel(n + 2 * k);
      for (int j = 0; j < k; ++j) t = tensor::contract_last_pair(t, m, n + 2 * (k - j), c);
      const double coeff = factorial(n + 2 * k) / (factorial(k) * factorial(n)) * std::pow(-0.5, k);
      acc += coeff * t;
    }
    out.kernel(n) = tensor::apply_each(acc, m, n, bt);
  }
  return out;
}

CoherentChaos sigma_coherent(const Mat& B, const CoherentChaos& phi) {
  require_square(B, phi.dim());
  const Mat bt = B.transpose();
  CoherentChaos out(phi.dim());
  for (const auto& term : phi.terms()) {
    const Vec b = bt * term.xi;
    out.add(term.w * std::exp(0.5 * (bilinear(b, b) - bilinear(term.xi, term.xi))), b);
  }
  return out;
}

cplx s_transform(const DenseChaos& phi, const Vec& xi) {
  if (xi.size() != phi.dim()) throw InputError("s_transform: xi has the wrong dimension");
  cplx acc = 0.0;
  for (int n = 0; n <= phi.n_max(); ++n) acc += tensor::pair(phi.kernel(n), tensor::power(xi, n));
  return acc;
}

cplx s_transform(const CoherentChaos& phi, const Vec& xi) {
  if (xi.size() != phi.dim()) throw InputError("s_transform: xi has the wrong dimension");
  cplx acc = 0.0;
  for (const auto& term : phi.terms()) acc += term.w * std::exp(bilinear(term.xi, xi));
  return acc;
}

cplx s_transform(const PreparedGaussKernel& phi, const PhaseFunction& xi) {
  return phi.evaluate(cplx(0.0, -1.0) * xi) * std::exp(-0.5 * pair_bilinear(xi, xi));
}

cplx t_from_s(const SFunctional& S, const Vec& f) {
  return S(kI * f) * std::exp(-0.5 * bilinear(f, f));
}

cplx gauss_kernel_S(const Mat& B, const Vec& xi) {
  require_square(B, static_cast<int>(xi.size()));
  const Vec bt_xi = B.transpose() * xi;
  return std::exp(-0.5 * (bilinear(xi, xi) - bilinear(bt_xi, bt_xi)));
}

cplx sigma_dual_S(const Mat& B, const SFunctional& S, const Vec& xi) {
  return gauss_kernel_S(B, xi) * S(B.transpose() * xi);
}

cplx wick_gamma_S(const Mat& B, const SFunctional& S, const Vec& xi) {
  const SFunctional gamma = [&](const Vec& x) { return S(B.transpose() * x); };
  return gauss_kernel_S(B, xi) * gamma(xi);
}

SFunctional as_s_functional(const CoherentChaos& phi) {
  return [phi](const Vec& xi) { return s_transform(phi, xi); };
}

SFunctional as_s_functional(const DenseChaos& phi) {
  return [phi](const Vec& xi) { return s_transform(phi, xi); };
}

}  // namespace wnpi

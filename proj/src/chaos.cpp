#include "wnpi/chaos.hpp"

#include <algorithm>
#include <numeric>

namespace wnpi {

namespace tensor {

Eigen::Index size(int m, int n) {
  Eigen::Index s = 1;
  for (int i = 0; i < n; ++i) s *= m;
  return s;
}

Vec symmetrize(const Vec& t, int m, int n) {
  if (n <= 1) return t;
  const Eigen::Index total = size(m, n);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> perms;
  do {
    perms.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<Eigen::Index> stride(n);
  for (int s = 0; s < n; ++s) stride[s] = size(m, n - 1 - s);

  Vec out = Vec::Zero(total);
  std::vector<int> digits(n);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    Eigen::Index rest = idx;
    for (int s = 0; s < n; ++s) {
      digits[s] = int(rest / stride[s]);
      rest %= stride[s];
    }
    cplx acc = 0.0;
    for (const auto& p : perms) {
      Eigen::Index j = 0;
      for (int s = 0; s < n; ++s) j += digits[p[s]] * stride[s];
      acc += t[j];
    }
    out[idx] = acc / double(perms.size());
  }
  return out;
}

Vec outer(const Vec& a, const Vec& b) {
  Vec out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a[i] * b;
  return out;
}

Vec contract_last_pair(const Vec& t, int m, int n, const Mat& c) {
  if (n < 2) throw InputError("tensor: contraction needs order >= 2");
  const Eigen::Index head = size(m, n - 2);
  const Eigen::Index mm = Eigen::Index(m) * m;
  Vec out(head);
  for (Eigen::Index i = 0; i < head; ++i) {
    cplx acc = 0.0;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) acc += t[i * mm + a * m + b] * c(a, b);
    out[i] = acc;
  }
  return out;
}

Vec apply_each(const Vec& t, int m, int n, const Mat& b) {
  Vec cur = t;
  // Apply b to slot s by viewing the tensor as (outer x m x inner).
  for (int s = 0; s < n; ++s) {
    const Eigen::Index outer_n = size(m, s);
    const Eigen::Index inner = size(m, n - 1 - s);
    Vec next = Vec::Zero(cur.size());
    for (Eigen::Index o = 0; o < outer_n; ++o) {
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
          const cplx bij = b(i, j);
          if (bij == cplx(0.0)) continue;
          next.segment((o * m + i) * inner, inner) += bij * cur.segment((o * m + j) * inner, inner);
        }
      }
    }
    cur = std::move(next);
  }
  return cur;
}

Vec power(const Vec& xi, int n) {
  Vec out = Vec::Ones(1);
  for (int k = 0; k < n; ++k) out = outer(out, xi);
  return out;
}

cplx pair(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw InputError("tensor: order mismatch in pairing");
  return (a.transpose() * b)(0, 0);
}

}  // namespace tensor

DenseChaos::DenseChaos(int dim, int n_max) : dim_(dim), n_max_(n_max) {
  if (dim < 1 || dim > kMaxDim) throw InputError("dense chaos: dimension must be in 1..12");
  if (n_max < 0 || n_max > kMaxOrder) throw InputError("dense chaos: order must be in 0..4");
  for (int n = 0; n <= n_max; ++n) kernels_.push_back(Vec::Zero(tensor::size(dim, n)));
}

Vec& DenseChaos::kernel(int n) {
  if (n < 0 || n > n_max_) throw InputError("dense chaos: order out of range");
  return kernels_[n];
}

const Vec& DenseChaos::kernel(int n) const {
  if (n < 0 || n > n_max_) throw InputError("dense chaos: order out of range");
  return kernels_[n];
}

void DenseChaos::symmetrize() {
  for (int n = 2; n <= n_max_; ++n) kernels_[n] = tensor::symmetrize(kernels_[n], dim_, n);
}

bool DenseChaos::is_symmetric(double tol) const {
  for (int n = 2; n <= n_max_; ++n) {
    const Vec& k = kernels_[n];
    if (k.size() == 0) continue;
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if ((tensor::symmetrize(k, dim_, n) - k).cwiseAbs().maxCoeff() > tol * scale) return false;
  }
  return true;
}

CoherentChaos::CoherentChaos(int dim, std::vector<CoherentTerm> terms) : dim_(dim) {
  for (auto& t : terms) add(t.w, std::move(t.xi));
}

void CoherentChaos::add(cplx w, Vec xi) {
  if (xi.size() != dim_) throw InputError("coherent chaos: xi has the wrong dimension");
  terms_.push_back({w, std::move(xi)});
}

CoherentChaos operator*(const CoherentChaos& a, const CoherentChaos& b) {
  if (a.dim_ != b.dim_) throw InputError("coherent chaos: dimension mismatch");
  CoherentChaos out(a.dim_);
  for (const auto& s : a.terms_) {
    for (const auto& t : b.terms_) {
      out.add(s.w * t.w * std::exp((s.xi.transpose() * t.xi)(0, 0)), s.xi + t.xi);
    }
  }
  return out;
}

}  // namespace wnpi

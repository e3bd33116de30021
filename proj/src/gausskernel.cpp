#include "wnpi/gausskernel.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "wnpi/linalg.hpp"
#include "wnpi/oracle.hpp"

namespace wnpi {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)

void require_lemma_hypothesis(const Mat& m) {
  const double scale = std::max(linalg::max_abs(m), 1e-300);
  const RMat re = 0.5 * (m.real() + m.real().transpose());
  const double re_size = re.cwiseAbs().maxCoeff();

  bool ok = false;
  if (re_size <= 1e-12 * scale) {
    ok = linalg::rcond(m) >= 1e-12;  // purely imaginary, invertible
  } else {
    Eigen::SelfAdjointEigenSolver<RMat> es(re, Eigen::EigenvaluesOnly);
    ok = es.eigenvalues().minCoeff() > 1e-12;
  }
  if (!ok) {
    std::ostringstream os;
    os << "Lemma hypothesis violated: M_{N^-1} = (<eta_i, N^-1 eta_j>) needs a positive "
          "definite real part, or zero real part and invertible imaginary part (M[0,0] = "
       << m(0, 0) << ")";
    throw MathError(os.str());
  }
}

}  // namespace

GaussKernelSpec GaussKernelSpec::vacuum(const TimeGrid& grid) {
  return GaussKernelSpec{BlockOperator::zero(grid), BlockOperator::zero(grid), PhaseFunction(grid),
                         {}};
}

PreparedGaussKernel::PreparedGaussKernel(GaussKernelSpec spec) : spec_(std::move(spec)) {
  const TimeGrid& grid = spec_.grid();
  require_same_grid(grid, spec_.L.grid());
  require_same_grid(grid, spec_.g.grid());
  for (const auto& pin : spec_.pinnings) {
    require_same_grid(grid, pin.eta.grid());
    if (!pin.eta.is_real()) throw InputError("pinning: eta must be real-valued");
    if (pin.eta.l2_norm() == 0.0) throw InputError("pinning: eta must be non-zero");
    if (!std::isfinite(pin.y)) throw InputError("pinning: y must be finite");
  }

  const BlockOperator one_plus_k = BlockOperator::identity(grid) + spec_.K;
  const BlockOperator n_op = one_plus_k + spec_.L;
  const double rk = rcond(one_plus_k);
  if (!(rk >= 1e-12)) throw SingularError("Id + K is singular", rk);
  const double rn = rcond(n_op);
  if (!(rn >= 1e-12)) throw SingularError("N = Id + K + L is singular", rn);

  n_lu_.compute(n_op.dense());
  g_coords_ = spec_.g.coords();

  const int J = pin_count();
  cplx log_det_m = 0.0;
  if (J > 0) {
    Mat eta(2 * grid.n(), J);
    for (int k = 0; k < J; ++k) eta.col(k) = spec_.pinnings[k].eta.coords();
    n_inv_eta_ = n_lu_.solve(eta);
    m_ = eta.transpose() * n_inv_eta_;
    m_ = 0.5 * (m_ + m_.transpose()).eval();
    require_lemma_hypothesis(m_);
    m_lu_.compute(m_);
    log_det_m = linalg::log_det_continued(m_);
  }
  log_det_rel_ = log_det(n_op) - log_det(one_plus_k);
  log_prefactor_ = -0.5 * J * kLog2Pi - 0.5 * (log_det_m + log_det_rel_);
}

GaussTerms PreparedGaussKernel::terms(const PhaseFunction& f) const {
  std::vector<double> ys;
  ys.reserve(spec_.pinnings.size());
  for (const auto& pin : spec_.pinnings) ys.push_back(pin.y);
  return terms(f, ys);
}

GaussTerms PreparedGaussKernel::terms(const PhaseFunction& f, const std::vector<double>& ys) const {
  require_same_grid(grid(), f.grid());
  if (static_cast<int>(ys.size()) != pin_count()) {
    throw InputError("gauss kernel: one y per pinning required");
  }
  const Vec h = f.coords() + g_coords_;
  const Vec n_inv_h = n_lu_.solve(h);

  // Vec::dot conjugates its left argument; the pairing is bilinear.
  GaussTerms out{log_prefactor_, -0.5 * (h.transpose() * n_inv_h)(0, 0), 0.0};
  if (pin_count() > 0) {
    Vec u = n_inv_eta_.transpose() * h;
    for (int k = 0; k < pin_count(); ++k) u[k] += kI * ys[k];
    const Vec m_inv_u = m_lu_.solve(u);
    out.pinning_quadratic = 0.5 * (u.transpose() * m_inv_u)(0, 0);
  }
  return out;
}

cplx PreparedGaussKernel::evaluate(const PhaseFunction& f) const {
  return std::exp(terms(f).log_value());
}

cplx PreparedGaussKernel::evaluate(const PhaseFunction& f, const std::vector<double>& ys) const {
  return std::exp(terms(f, ys).log_value());
}

cplx t_transform_gauss(const GaussKernelSpec& spec, const PhaseFunction& f) {
  return PreparedGaussKernel(spec).evaluate(f);
}

cplx generalized_expectation(const GaussKernelSpec& spec) {
  return t_transform_gauss(spec, PhaseFunction(spec.grid()));
}

cplx donsker_from_pairings(cplx a, cplx b, cplx c, double x) {
  if (std::abs(a) == 0.0) throw InputError("Donsker delta: <eta, eta> vanishes");
  const cplx arg = kI * b - x;
  return std::exp(-0.5 * std::log(2.0 * kPi * a) - arg * arg / (2.0 * a) - 0.5 * c);
}

cplx t_transform_donsker(const PhaseFunction& eta, double x, const PhaseFunction& f) {
  require_same_grid(eta.grid(), f.grid());
  if (!eta.is_real()) throw InputError("Donsker delta: eta must be real-valued");
  if (eta.l2_norm() == 0.0) throw InputError("Donsker delta: eta must be non-zero");
  return donsker_from_pairings(pair_bilinear(eta, eta), pair_bilinear(eta, f),
                               pair_bilinear(f, f), x);
}

cplx normalized_exp_T(const BlockOperator& K, const PhaseFunction& f) {
  require_same_grid(K.grid(), f.grid());
  const BlockOperator inv = invert(BlockOperator::identity(K.grid()) + K);
  return std::exp(-0.5 * pair_bilinear(f, inv.apply(f)));
}

GrotexReport grotex_check(const RMat& K, const Vec& f) {
  const Eigen::Index m = K.rows();
  if (K.cols() != m || f.size() != m) throw InputError("grotex: K must be square and match f");
  if (!K.isApprox(K.transpose(), 1e-12) && (K - K.transpose()).norm() > 1e-14) {
    throw InputError("grotex: K must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (K + K.transpose()), Eigen::EigenvaluesOnly);
  if (m > 0 && (es.eigenvalues().minCoeff() <= -0.5 || es.eigenvalues().maxCoeff() > 1e-14)) {
    throw MathError("grotex: spectrum of K must lie in (-1/2, 0]");
  }
  const Mat kc = K.cast<cplx>();
  const Mat id = Mat::Identity(m, m);

  GrotexReport r;
  r.lhs = gauss_integral_analytic(OracleProblem{2.0 * kc, Vec::Zero(m), {}});
  r.rhs = std::exp(-0.5 * linalg::log_det_continued(id + 2.0 * kc));
  r.tg_oracle = gauss_integral_analytic(OracleProblem{kc, kI * f, {}});
  const Mat n = id + kc;
  const Vec n_inv_f = n.partialPivLu().solve(f);
  r.tg_formula = std::exp(-0.5 * linalg::log_det_continued(n) -
                          0.5 * (f.transpose() * n_inv_f)(0, 0));
  return r;
}

UReport check_u_functional(const std::function<cplx(const PhaseFunction&)>& F,
                           const PhaseFunction& f, const PhaseFunction& g,
                           const std::vector<cplx>& z_samples, const UCheckOptions& opt) {
  require_same_grid(f.grid(), g.grid());
  UReport rep;
  const double norm2 = f.l2_norm() * f.l2_norm();

  const cplx f0 = F(PhaseFunction(f.grid()));
  rep.C = std::abs(f0);
  if (!std::isfinite(rep.C) || rep.C == 0.0) rep.finite = false;

  // Growth: C fixed at |F(0)|, D the smallest rate covering every sample.
  std::vector<std::pair<double, double>> pts;  // (|z|^2 |f|^2, log|F|)
  for (const cplx z : z_samples) {
    const double a = std::abs(F(z * f));
    if (!std::isfinite(a)) {
      rep.finite = false;
      ++rep.violations;
      continue;
    }
    const double x = std::norm(z) * norm2;
    pts.emplace_back(x, a > 0.0 ? std::log(a) : -INFINITY);
    if (x > 0.0 && rep.finite && a > 0.0) {
      rep.D = std::max(rep.D, (std::log(a) - std::log(rep.C)) / x);
    }
  }
  if (rep.finite) {
    for (const auto& [x, la] : pts) {
      if (la > std::log(rep.C) + rep.D * x + 1e-9 * (1.0 + std::abs(la))) ++rep.violations;
    }
  }
  if (!std::isfinite(rep.D)) rep.finite = false;

  // Ray analyticity of lambda -> F(lambda f + g): d/dy = i d/dx.
  const double h = opt.step;
  const int p = std::max(opt.disc_points, 1);
  for (int a = 0; a < p; ++a) {
    for (int b = 0; b < p; ++b) {
      const double x = p == 1 ? 0.0 : opt.disc_radius * (2.0 * a / (p - 1) - 1.0);
      const double y = p == 1 ? 0.0 : opt.disc_radius * (2.0 * b / (p - 1) - 1.0);
      if (x * x + y * y > opt.disc_radius * opt.disc_radius * (1.0 + 1e-12)) continue;
      const cplx lam(x, y);
      auto at = [&](cplx l) { return F(l * f + g); };
      const cplx fx = (at(lam + h) - at(lam - h)) / (2.0 * h);
      const cplx fy = (at(lam + cplx(0.0, h)) - at(lam - cplx(0.0, h))) / (2.0 * h);
      const double scale = std::max({std::abs(fx), std::abs(fy), std::abs(at(lam)), 1e-300});
      const double res = std::abs(fy - kI * fx) / scale;
      if (!std::isfinite(res)) {
        rep.finite = false;
        continue;
      }
      rep.max_cr_residual = std::max(rep.max_cr_residual, res);
    }
  }
  return rep;
}

std::vector<cplx> disc_samples(double radius, int rings, int per_ring) {
  std::vector<cplx> out;
  for (int j = 1; j <= rings; ++j) {
    const double r = radius * j / rings;
    for (int q = 0; q < per_ring; ++q) out.push_back(std::polar(r, 2.0 * kPi * (q + 0.5) / per_ring));
  }
  return out;
}

}  // namespace wnpi

#include "wnpi/suites.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "wnpi/io.hpp"
#include "wnpi/linalg.hpp"
#include "wnpi/oracle.hpp"
#include "wnpi/pathint.hpp"
#include "wnpi/rng.hpp"
#include "wnpi/scaling.hpp"

namespace wnpi {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Outcome {
  double deviation = kNaN;
  double tolerance = kNaN;
  std::optional<bool> ok;
  bool skipped = false;
  std::string note;
};

Outcome measured(double deviation, double tolerance, std::string note = {}) {
  Outcome o;
  o.deviation = deviation;
  o.tolerance = tolerance;
  o.note = std::move(note);
  return o;
}

Outcome boolean(bool ok, std::string note = {}) {
  Outcome o;
  o.ok = ok;
  o.note = std::move(note);
  return o;
}

Outcome skipped(std::string note) {
  Outcome o;
  o.skipped = true;
  o.note = std::move(note);
  return o;
}

// Largest per-component z-score of a Monte Carlo estimate against a reference.
double z_score(const McEstimate& e, cplx ref) {
  auto z = [](double d, double se) {
    if (se > 0.0) return std::abs(d) / se;
    return std::abs(d) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  };
  return std::max(z(e.value.real() - ref.real(), e.stderr_re),
                  z(e.value.imag() - ref.imag(), e.stderr_im));
}

Outcome mc_outcome(const McEstimate& e, cplx ref, std::string note = {}) {
  Outcome o = measured(z_score(e, ref), 3.0, std::move(note));
  o.ok = e.agrees_with(ref, 3.0);
  return o;
}

std::string fmt(double x) { return io::format_double(x); }

class Runner {
 public:
  Runner(RunReport& report, const SuiteOptions& opt) : report_(report), opt_(opt) {}

  double tol(double def) const { return opt_.tol.value_or(def); }
  const SuiteOptions& options() const { return opt_; }

  void run(const std::string& id, const std::function<Outcome()>& fn) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = boolean(false, std::string("exception: ") + e.what());
    }
    CheckRecord r;
    r.id = id;
    r.deviation = o.deviation;
    r.tolerance = o.tolerance;
    r.note = o.note;
    if (o.skipped) {
      r.status = CheckStatus::skipped;
    } else if (o.ok) {
      r.status = *o.ok ? CheckStatus::pass : CheckStatus::fail;
    } else {
      r.status = o.deviation <= o.tolerance ? CheckStatus::pass : CheckStatus::fail;
    }
    if (opt_.timings) {
      r.runtime_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    report_.add(std::move(r));
  }

 private:
  RunReport& report_;
  const SuiteOptions& opt_;
};

// ---- random test data -------------------------------------------------------

Vec random_vec(NormalSequence& rs, int m, double scale, bool complex_values) {
  Vec v(m);
  for (int i = 0; i < m; ++i) {
    const double re = rs.next();
    const double im = complex_values ? rs.next() : 0.0;
    v[i] = scale * cplx(re, im);
  }
  return v;
}

Mat random_mat(NormalSequence& rs, int m, double scale, bool complex_values) {
  Mat a(m, m);
  for (int j = 0; j < m; ++j) a.col(j) = random_vec(rs, m, scale, complex_values);
  return a;
}

PhaseFunction random_function(NormalSequence& rs, const TimeGrid& grid, double scale,
                              bool complex_values) {
  return PhaseFunction(grid, random_vec(rs, grid.n(), scale, complex_values),
                       random_vec(rs, grid.n(), scale, complex_values));
}

PhaseFunction values(const TimeGrid& grid, std::vector<cplx> x, std::vector<cplx> p) {
  Vec xv(grid.n()), pv(grid.n());
  for (int i = 0; i < grid.n(); ++i) {
    xv[i] = x[i];
    pv[i] = p[i];
  }
  return PhaseFunction(grid, xv, pv);
}

PhaseFunction x_ind(const TimeGrid& g, double a, double b) {
  return indicator(g, a, b, Component::x);
}

// ---- opalg -------------------------------------------------------------------

void opalg_suite(Runner& run) {
  const std::uint64_t seed = run.options().seed;
  for (const int n : {1, 16, 256}) {
    const TimeGrid grid(1.5, n);
    const double t = 1.0;
    const std::string tag = ".n" + std::to_string(n);
    run.run("opalg.R^2=N^-1" + tag, [&] {
      const BlockOperator R = sqrt_R(grid, t);
      return measured(max_abs_diff(R * R, free_N_inv(grid, t)), run.tol(1e-12));
    });
    run.run("opalg.R_bilinear_symmetry" + tag, [&] {
      NormalSequence rs(seed, 100 + n);
      const BlockOperator R = sqrt_R(grid, t);
      double dev = 0.0;
      for (int trial = 0; trial < 5; ++trial) {
        const PhaseFunction f = random_function(rs, grid, 1.0, true);
        const PhaseFunction g = random_function(rs, grid, 1.0, true);
        dev = std::max(dev, std::abs(pair_bilinear(R.apply(f), g) - pair_bilinear(f, R.apply(g))));
      }
      dev = std::max(dev, max_abs_diff(R, R.transpose()));
      return measured(dev, run.tol(1e-12));
    });
  }
  run.run("opalg.N^-1=inv(Id+K)", [&] {
    const TimeGrid grid(1.5, 16);
    const BlockOperator inv = invert(BlockOperator::identity(grid) + kinetic_K(grid, 1.0));
    return measured(max_abs_diff(inv, free_N_inv(grid, 1.0)), run.tol(1e-13));
  });
  run.run("opalg.N^-1(Id+K)=Id", [&] {
    const TimeGrid grid(1.5, 16);
    const BlockOperator id = BlockOperator::identity(grid);
    return measured(max_abs_diff(free_N_inv(grid, 1.0) * (id + kinetic_K(grid, 1.0)), id),
                    run.tol(1e-13));
  });
  run.run("opalg.invert_two_sided", [&] {
    NormalSequence rs(seed, 200);
    const TimeGrid grid(1.0, 3);
    const Mat a = Mat::Identity(6, 6) + random_mat(rs, 6, 0.3, true);
    const BlockOperator op = BlockOperator::from_dense(grid, a);
    const BlockOperator inv = invert(op);
    const BlockOperator id = BlockOperator::identity(grid);
    const double cond = 1.0 / rcond(op);
    const double dev = std::max(max_abs_diff(op * inv, id), max_abs_diff(inv * op, id));
    return measured(dev / cond, run.tol(1e-10), "cond=" + fmt(cond));
  });
  run.run("opalg.det_rel_multiplicative", [&] {
    NormalSequence rs(seed, 201);
    const TimeGrid grid(1.0, 3);
    const BlockOperator K = BlockOperator::from_dense(grid, random_mat(rs, 6, 0.3, true));
    const BlockOperator L = BlockOperator::from_dense(grid, random_mat(rs, 6, 0.3, true));
    const BlockOperator id = BlockOperator::identity(grid);
    const cplx lhs = linalg::det((id + K + L).dense());
    const cplx rhs = linalg::det((id + K).dense()) * det_rel(K, L);
    return measured(std::abs(lhs - rhs) / std::abs(lhs), run.tol(1e-10));
  });
  run.run("opalg.det_rel_symbol_factorization", [&] {
    const TimeGrid grid(1.5, 8);
    const BlockOperator K = kinetic_K(grid, 1.0);
    const BlockOperator L = cplx(0.3, 0.1) * BlockOperator::identity(grid) + free_N_inv(grid, 1.0);
    const cplx by_symbols = det_rel(K, L);
    const cplx dense = det_rel(BlockOperator::from_dense(grid, K.dense()),
                               BlockOperator::from_dense(grid, L.dense()));
    return measured(std::abs(by_symbols - dense) / std::abs(dense), run.tol(1e-12));
  });
  run.run("opalg.volterra_symmetry", [&] {
    const RMat a = volterra_A(TimeGrid(1.5, 64), 1.0);
    return measured((a - a.transpose()).cwiseAbs().maxCoeff(), run.tol(1e-15));
  });
  run.run("opalg.volterra_constant", [&] {
    // (A 1)(s) = (t^2 - s^2) / 2 on [0, t)
    const TimeGrid grid(1.0, 64);
    const RVec v = volterra_A(grid, 1.0) * RVec::Ones(64);
    double dev = 0.0;
    for (int i = 0; i < 64; ++i) dev = std::max(dev, std::abs(v[i] - 0.5 * (1.0 - grid.node(i) * grid.node(i))));
    return measured(dev, run.tol(grid.dt()));
  });
}

// ---- gauss -------------------------------------------------------------------

GaussKernelSpec kinetic_spec(const TimeGrid& grid, double t, double y) {
  return GaussKernelSpec{kinetic_K(grid, t), BlockOperator::zero(grid), PhaseFunction(grid),
                         {Pinning{x_ind(grid, 0.0, t), y}}};
}

void gauss_suite(Runner& run) {
  const std::uint64_t seed = run.options().seed;
  run.run("gauss.vacuum", [&] {
    return measured(std::abs(generalized_expectation(GaussKernelSpec::vacuum(TimeGrid(1.0, 4))) - 1.0),
                    run.tol(1e-15));
  });
  run.run("gauss.donsker_density", [&] {
    const TimeGrid grid(1.0, 4);
    GaussKernelSpec spec = GaussKernelSpec::vacuum(grid);
    spec.pinnings.push_back({x_ind(grid, 0.0, 1.0), 0.0});
    return measured(std::abs(generalized_expectation(spec) - 1.0 / std::sqrt(2.0 * kPi)),
                    run.tol(1e-14));
  });
  run.run("gauss.kinetic_modulus_phase", [&] {
    const TimeGrid grid(1.5, 12);
    const double t = 1.0;
    const cplx v = generalized_expectation(kinetic_spec(grid, t, 0.0));
    const double dev = std::max(std::abs(std::abs(v) - 1.0 / std::sqrt(2.0 * kPi * t)),
                                std::abs(std::arg(v) + kPi / 4.0));
    return measured(dev, run.tol(1e-13));
  });
  run.run("gauss.lemma_vs_donsker", [&] {
    NormalSequence rs(seed, 300);
    const TimeGrid grid(1.0, 4);
    PhaseFunction eta = x_ind(grid, 0.0, 0.75) + 0.5 * indicator(grid, 0.25, 1.0, Component::p);
    GaussKernelSpec spec = GaussKernelSpec::vacuum(grid);
    spec.pinnings.push_back({eta, 0.0});
    const PreparedGaussKernel kernel(spec);
    double dev = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const PhaseFunction f = random_function(rs, grid, 0.7, false);
      const double x = rs.next();
      const cplx a = kernel.evaluate(f, {x});
      dev = std::max(dev, std::abs(a - t_transform_donsker(eta, x, f)) / std::max(1.0, std::abs(a)));
    }
    return measured(dev, run.tol(1e-10));
  });
  run.run("gauss.nexp_kinetic", [&] {
    const TimeGrid grid(1.5, 12);
    const cplx v = normalized_exp_T(kinetic_K(grid, 1.0), x_ind(grid, 0.0, 1.0));
    return measured(std::abs(v - std::exp(cplx(0.0, -0.5))), run.tol(1e-14));
  });
  for (int d = 1; d <= 4; ++d) {
    run.run("gauss.grotex.d" + std::to_string(d), [&, d] {
      NormalSequence rs(seed, 310 + d);
      const Mat q = random_mat(rs, d, 1.0, false).householderQr().householderQ();
      RVec lam(d);
      for (int i = 0; i < d; ++i) lam[i] = -0.45 * std::abs(std::tanh(rs.next()));
      const RMat K = (q.real() * lam.asDiagonal() * q.real().transpose());
      const RMat Ks = 0.5 * (K + K.transpose());
      const GrotexReport r = grotex_check(Ks, random_vec(rs, d, 0.5, false));
      return measured(std::max(r.mass_deviation(), r.transform_deviation()), run.tol(1e-10),
                      "rhs=" + fmt(r.rhs.real()));
    });
  }
  run.run("gauss.grotex.mc.d2", [&] {
    const RMat K = (RMat(2, 2) << -0.2, 0.03, 0.03, -0.1).finished();
    const GrotexReport r = grotex_check(K, Vec::Zero(2));
    McOptions mo{run.options().seed, run.options().samples, run.options().threads};
    const McEstimate e = gauss_integral_mc(OracleProblem{2.0 * K.cast<cplx>(), Vec::Zero(2), {}},
                                           kMcBandwidth, mo);
    return mc_outcome(e, r.rhs);
  });

  // Growth and ray analyticity of every exported T-transform.
  const TimeGrid ug(1.5, 4);
  const double ut = 1.0;
  const PhaseFunction ueta = x_ind(ug, 0.0, ut);
  const BlockOperator uK = kinetic_K(ug, ut);
  const BlockOperator uL = volterra_ho(ug, ut, 1.0);
  const auto vacuum = std::make_shared<PreparedGaussKernel>(GaussKernelSpec::vacuum(ug));
  const auto kinetic = std::make_shared<PreparedGaussKernel>(kinetic_spec(ug, ut, 0.4));
  const auto ho = std::make_shared<PreparedGaussKernel>(ho_spec(ug, ut, 1.0, 0.4));
  const std::vector<std::pair<std::string, std::function<cplx(const PhaseFunction&)>>> transforms = {
      {"t_transform_gauss.vacuum", [vacuum](const PhaseFunction& f) { return vacuum->evaluate(f); }},
      {"t_transform_gauss.kinetic", [kinetic](const PhaseFunction& f) { return kinetic->evaluate(f); }},
      {"t_transform_gauss.ho", [ho](const PhaseFunction& f) { return ho->evaluate(f); }},
      {"t_transform_donsker", [ueta](const PhaseFunction& f) { return t_transform_donsker(ueta, 0.4, f); }},
      {"normalized_exp_T", [uK](const PhaseFunction& f) { return normalized_exp_T(uK, f); }},
      {"free_integrand_T", [&ug](const PhaseFunction& f) { return free_integrand_T(ug, 1.0, 0.4, f); }},
      {"scaled_quadratic_T", [&ug, uL, ueta](const PhaseFunction& f) {
         return scaled_quadratic_T_only(ug, 1.0, uL, {Pinning{ueta, 0.4}}, f);
       }}};
  for (std::size_t idx = 0; idx < transforms.size(); ++idx) {
    const auto& [name, F] = transforms[idx];
    run.run("gauss.u_functional." + name, [&, idx] {
      NormalSequence rs(seed, 400 + idx);
      const std::vector<cplx> zs = disc_samples(4.0, 4, 8);
      double cr = 0.0, d_max = 0.0, c_max = 0.0;
      bool ok = true;
      for (int j = 0; j < 20; ++j) {
        PhaseFunction f = random_function(rs, ug, 1.0, false);
        const double target = 2.0 * (j + 1) / 20.0;  // norms spread over (0, 2]
        f *= target / f.l2_norm();
        const PhaseFunction g = random_function(rs, ug, 0.2, false);
        const UReport r = check_u_functional(F, f, g, zs);
        ok = ok && r.finite && r.violations == 0;
        cr = std::max(cr, r.max_cr_residual);
        d_max = std::max(d_max, r.D);
        c_max = std::max(c_max, r.C);
      }
      Outcome o = measured(cr, run.tol(1e-6), "C_max=" + fmt(c_max) + " D_max=" + fmt(d_max));
      o.ok = ok && cr <= o.tolerance;
      return o;
    });
  }

  run.run("gauss.branch_continuity.det_rel", [&] {
    // det_rel(K, tau L)^{-1/2} along 64 steps, k = 1, t = 1 (det_rel stays off zero)
    const TimeGrid grid(1.0, 32);
    const BlockOperator K = kinetic_K(grid, 1.0);
    const BlockOperator L = volterra_ho(grid, 1.0, 1.0);
    double jump = 0.0;
    cplx prev = 1.0;
    for (int s = 1; s <= 64; ++s) {
      const cplx v = std::exp(-0.5 * log_det_rel(K, cplx(s / 64.0) * L));
      jump = std::max(jump, std::abs(v - prev) / std::abs(prev));
      prev = v;
    }
    return measured(jump, 0.1);
  });
  run.run("gauss.branch_continuity.prefactor", [&] {
    // full prefactor det(M)^{-1/2} det_rel^{-1/2} for k = 2, t = 2, where det_rel changes sign
    const TimeGrid grid(2.0, 32);
    double jump = 0.0;
    cplx prev = std::exp(PreparedGaussKernel(kinetic_spec(grid, 2.0, 0.0)).log_prefactor());
    for (int s = 1; s <= 64; ++s) {
      const cplx v = std::exp(PreparedGaussKernel(ho_spec(grid, 2.0, 2.0 * s / 64.0, 0.0)).log_prefactor());
      jump = std::max(jump, std::abs(v - prev) / std::abs(prev));
      prev = v;
    }
    return measured(jump, 0.1);
  });
}

// ---- scaling -----------------------------------------------------------------

DenseChaos random_dense(NormalSequence& rs, int m, int n_max, double scale) {
  DenseChaos phi(m, n_max);
  for (int n = 0; n <= n_max; ++n) {
    const Eigen::Index sz = phi.kernel(n).size();
    Vec k(sz);
    for (Eigen::Index i = 0; i < sz; ++i) k[i] = scale * cplx(rs.next(), rs.next());
    phi.kernel(n) = k;
  }
  phi.symmetrize();
  return phi;
}

CoherentChaos random_coherent(NormalSequence& rs, int m, int terms, double scale) {
  CoherentChaos phi(m);
  for (int j = 0; j < terms; ++j) phi.add(cplx(rs.next(), rs.next()), random_vec(rs, m, scale, true));
  return phi;
}

double rel(cplx a, cplx b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Oracle side of the Wick identities: E[phi(B w) :e^<xi, B w>:] for coherent phi.
cplx wick_lhs_oracle(const Mat& B, const CoherentChaos& phi, const Vec& xi) {
  const int m = phi.dim();
  cplx acc = 0.0;
  for (const auto& term : phi.terms()) {
    OracleProblem p{Mat::Zero(m, m), B.transpose() * (term.xi + xi), {}};
    p.log_scale = -0.5 * ((term.xi.transpose() * term.xi)(0, 0) + (xi.transpose() * xi)(0, 0));
    acc += term.w * gauss_integral_analytic(p);
  }
  return acc;
}

void scaling_suite(Runner& run) {
  const std::uint64_t seed = run.options().seed;
  const int m = 6;

  run.run("scaling.trace_kernel", [&] {
    NormalSequence rs(seed, 500);
    const Mat B = random_mat(rs, m, 1.0, true);
    const Mat tr = trace_kernel(B);
    double dev = 0.0;
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b) {
        const Vec ea = Vec::Unit(m, a), eb = Vec::Unit(m, b);
        dev = std::max(dev, std::abs(tr(a, b) - (ea.transpose() * B * eb)(0, 0)));
      }
    }
    dev = std::max(dev, std::abs(tr.norm() - B.norm()));
    return measured(dev, run.tol(1e-13));
  });
  run.run("scaling.sigma_identity", [&] {
    NormalSequence rs(seed, 501);
    const DenseChaos phi = random_dense(rs, 4, 3, 0.5);
    const DenseChaos out = sigma_dense(Mat::Identity(4, 4), phi);
    double dev = 0.0;
    for (int n = 0; n <= 3; ++n) dev = std::max(dev, (out.kernel(n) - phi.kernel(n)).cwiseAbs().maxCoeff());
    const CoherentChaos c = random_coherent(rs, 4, 3, 0.5);
    const CoherentChaos co = sigma_coherent(Mat::Identity(4, 4), c);
    for (std::size_t j = 0; j < c.terms().size(); ++j) {
      dev = std::max(dev, std::abs(co.terms()[j].w - c.terms()[j].w));
      dev = std::max(dev, (co.terms()[j].xi - c.terms()[j].xi).cwiseAbs().maxCoeff());
    }
    return measured(dev, 0.0, "exact");
  });
  run.run("scaling.z_reduction", [&] {
    NormalSequence rs(seed, 502);
    const DenseChaos phi = random_dense(rs, 2, 2, 1.0);
    const cplx z(0.7, 0.2);
    const DenseChaos out = sigma_dense(z * Mat::Identity(2, 2), phi);
    const Mat id = Mat::Identity(2, 2);
    // phi_z^(0) = phi0 + (z^2 - 1) tr phi2, phi_z^(1) = z phi1, phi_z^(2) = z^2 phi2
    const cplx c0 = phi.kernel(0)[0] + (z * z - 1.0) * tensor::contract_last_pair(phi.kernel(2), 2, 2, id)[0];
    double dev = std::abs(out.kernel(0)[0] - c0);
    dev = std::max(dev, (out.kernel(1) - z * phi.kernel(1)).cwiseAbs().maxCoeff());
    dev = std::max(dev, (out.kernel(2) - z * z * phi.kernel(2)).cwiseAbs().maxCoeff());
    return measured(dev, run.tol(1e-12));
  });
  run.run("scaling.pointwise", [&] {
    NormalSequence rs(seed, 503);
    const DenseChaos phi = random_dense(rs, m, 3, 0.4);
    const Mat B = random_mat(rs, m, 0.4, false);
    const DenseChaos scaled = sigma_dense(B, phi);
    double dev = 0.0;
    for (int s = 0; s < 50; ++s) {
      const Vec w = random_vec(rs, m, 1.0, false);
      dev = std::max(dev, rel(wick_eval(scaled, w), wick_eval(phi, B * w)));
    }
    return measured(dev, run.tol(1e-8));
  });
  run.run("scaling.multiplicativity", [&] {
    NormalSequence rs(seed, 504);
    const Mat B = random_mat(rs, m, 0.4, true);
    const CoherentChaos a = random_coherent(rs, m, 2, 0.3);
    const CoherentChaos b = random_coherent(rs, m, 2, 0.3);
    const CoherentChaos lhs = sigma_coherent(B, a * b);
    const CoherentChaos rhs = sigma_coherent(B, a) * sigma_coherent(B, b);
    double dev = 0.0;
    for (int s = 0; s < 10; ++s) {
      const Vec xi = random_vec(rs, m, 0.5, true);
      dev = std::max(dev, rel(s_transform(lhs, xi), s_transform(rhs, xi)));
    }
    return measured(dev, run.tol(1e-10));
  });

  const TimeGrid grid(1.0, 3);
  run.run("scaling.wick_i.donsker", [&] {
    NormalSequence rs(seed, 505);
    const Mat B = random_mat(rs, m, 0.4, false);
    const PhaseFunction eta = x_ind(grid, 0.0, 1.0);
    const double y = 0.3;
    const SFunctional S = [&](const Vec& zeta) {
      const PhaseFunction z = PhaseFunction::from_coords(grid, zeta);
      return t_transform_donsker(eta, y, cplx(0.0, -1.0) * z) * std::exp(-0.5 * pair_bilinear(z, z));
    };
    double dev = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Vec xi = random_vec(rs, m, 0.5, true);
      OracleProblem p{Mat::Zero(m, m), B.transpose() * xi, {OraclePin{eta.coords().real(), y}}};
      p.log_scale = -0.5 * (xi.transpose() * xi)(0, 0);
      dev = std::max(dev, rel(sigma_dual_S(B, S, xi), gauss_integral_analytic(p)));
    }
    return measured(dev, run.tol(1e-8));
  });
  run.run("scaling.wick_i.one", [&] {
    NormalSequence rs(seed, 506);
    const Mat B = random_mat(rs, m, 0.4, false);
    double dev = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Vec xi = random_vec(rs, m, 0.5, true);
      OracleProblem p{Mat::Zero(m, m), B.transpose() * xi, {}};
      p.log_scale = -0.5 * (xi.transpose() * xi)(0, 0);
      dev = std::max(dev, rel(gauss_kernel_S(B, xi), gauss_integral_analytic(p)));
    }
    return measured(dev, run.tol(1e-8));
  });
  for (const char* which : {"ii", "iii"}) {
    run.run(std::string("scaling.wick_") + which, [&, which] {
      NormalSequence rs(seed, which[2] ? 508 : 507);
      const Mat B = random_mat(rs, m, 0.4, false);
      const CoherentChaos phi = random_coherent(rs, m, 3, 0.4);
      const SFunctional s_scaled = as_s_functional(sigma_coherent(B, phi));
      double dev = 0.0;
      for (int s = 0; s < 20; ++s) {
        const Vec xi = random_vec(rs, m, 0.5, true);
        const cplx rhs = which[2] ? wick_gamma_S(B, s_scaled, xi) : sigma_dual_S(B, s_scaled, xi);
        dev = std::max(dev, rel(rhs, wick_lhs_oracle(B, phi, xi)));
      }
      return measured(dev, run.tol(1e-8));
    });
  }
  run.run("scaling.measure_transform", [&] {
    NormalSequence rs(seed, 509);
    const int d = 3;
    const Mat B = Mat::Identity(d, d) + random_mat(rs, d, 0.3, false);
    const Vec xi = random_vec(rs, d, 0.7, false);
    const SFunctional S = [&](const Vec& z) { return gauss_kernel_S(B, z); };
    const cplx t_value = t_from_s(S, xi);
    const Vec bt_xi = B.transpose() * xi;
    const double expected_gap = std::abs(t_value - std::exp(-0.5 * (bt_xi.transpose() * bt_xi)(0, 0)));
    const RVec a = bt_xi.real();
    McOptions mo{run.options().seed, run.options().samples, run.options().threads};
    const McEstimate e = mc_expectation(d, [&](const RVec& w) { return std::exp(kI * a.dot(w)); }, mo);
    Outcome o = mc_outcome(e, t_value, "closed-form gap " + fmt(expected_gap));
    o.ok = *o.ok && expected_gap <= 1e-14;
    return o;
  });
}

// ---- oracle ------------------------------------------------------------------

void oracle_suite(Runner& run) {
  const SuiteOptions& opt = run.options();
  run.run("oracle.philox_kat", [&] {
    using C = Philox4x32::Counter;
    const bool ok =
        Philox4x32::apply({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u} &&
        Philox4x32::apply({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
            C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu} &&
        Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                          {0xa4093822u, 0x299f31d0u}) ==
            C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u};
    return boolean(ok);
  });

  int plus = 0, minus = 0;
  for (const CorpusCase& c : lemma_corpus()) {
    const int n = c.spec.grid().n();
    if (n < opt.dims_min || n > opt.dims_max) continue;
    run.run("oracle.magic." + c.name, [&] {
      const MagicReport r = verify_magicformula(c.spec, c.f);
      if (!c.spec.pinnings.empty() && std::abs(r.deviation_plus - r.deviation_minus) > 1e-9) {
        (r.resolved_sign > 0 ? plus : minus) += 1;
      }
      return measured(r.abs_deviation, run.tol(1e-9),
                      "resolved_sign=" + std::to_string(r.resolved_sign) + " minus_sign_deviation=" +
                          fmt(r.deviation_minus));
    });
    run.run("oracle.mc." + c.name, [&] {
      const OracleCase oc = problem_from_spec(c.spec, c.f);
      if (!mc_square_integrable(oc.numerator, kMcBandwidth)) {
        return skipped("oscillatory integrand: no finite-variance Monte Carlo estimator");
      }
      McOptions mo{opt.seed, opt.samples, opt.threads};
      const McEstimate e = gauss_integral_mc(oc.numerator, kMcBandwidth, mo);
      const cplx mollified = gauss_integral_analytic(mollify(oc.numerator, kMcBandwidth));
      const cplx exact = gauss_integral_analytic(oc.numerator);
      return mc_outcome(e, mollified, "bandwidth_bias=" + fmt(std::abs(mollified - exact)));
    });
  }
  run.run("oracle.pinning_sign", [&] {
    return boolean(minus == 0 && plus > 0,
                   "cases favouring +1/2: " + std::to_string(plus) + ", -1/2: " + std::to_string(minus));
  });

  run.run("oracle.grotex_1d_analytic", [&] {
    return measured(std::abs(gauss_integral_analytic(OracleProblem{Mat::Constant(1, 1, -0.5), Vec::Zero(1), {}}) -
                             std::sqrt(2.0)),
                    run.tol(1e-14));
  });
  run.run("oracle.quadrature_vs_analytic", [&] {
    NormalSequence rs(opt.seed, 620);
    double dev = 0.0;
    for (int m = 1; m <= 3; ++m) {
      // damped forms: Re Q = 0.5 Id + small symmetric, Im Q symmetric
      Mat q = 0.5 * Mat::Identity(m, m) + random_mat(rs, m, 0.1, true);
      q = (0.5 * (q + q.transpose())).eval();
      const OracleProblem p{q, random_vec(rs, m, 0.3, true), {}};
      const cplx exact = gauss_integral_analytic(p);
      dev = std::max(dev, std::abs(gauss_integral_quadrature(p, 40) - exact) / std::abs(exact));
    }
    return measured(dev, run.tol(1e-10));
  });
  run.run("oracle.damping_continuity", [&] {
    // kinetic corpus case: Q + eps Id -> Q
    const CorpusCase c = lemma_corpus()[5];
    OracleProblem p = problem_from_spec(c.spec, c.f).numerator;
    const cplx z0 = gauss_integral_analytic(p);
    p.Q += 1e-7 * Mat::Identity(p.dim(), p.dim());
    return measured(std::abs(gauss_integral_analytic(p) - z0), 1e-5);
  });
  for (int n = 1; n <= 3; ++n) {
    run.run("oracle.wick_mean_zero.n" + std::to_string(n), [&, n] {
      NormalSequence rs(opt.seed, 600 + n);
      DenseChaos phi(4, n);
      Vec k(phi.kernel(n).size());
      for (Eigen::Index i = 0; i < k.size(); ++i) k[i] = 0.5 * cplx(rs.next(), rs.next());
      phi.kernel(n) = k;
      phi.symmetrize();
      McOptions mo{opt.seed, std::min(opt.samples, 200'000L), opt.threads};
      const McEstimate e =
          mc_expectation(4, [&](const RVec& w) { return wick_eval(phi, w.cast<cplx>()); }, mo);
      return mc_outcome(e, 0.0);
    });
  }
  run.run("oracle.wick_reproducing", [&] {
    NormalSequence rs(opt.seed, 610);
    const int d = 3;
    const Vec xi = random_vec(rs, d, 0.4, false);
    const Vec eta = random_vec(rs, d, 0.4, false);
    const cplx expected = std::exp((xi.transpose() * eta)(0, 0) + 0.5 * (eta.transpose() * eta)(0, 0));
    McOptions mo{opt.seed, opt.samples, opt.threads};
    const McEstimate e = mc_expectation(
        d,
        [&](const RVec& w) {
          const Vec wc = w.cast<cplx>();
          return std::exp((xi.transpose() * wc)(0, 0) - 0.5 * (xi.transpose() * xi)(0, 0) +
                          (eta.transpose() * wc)(0, 0));
        },
        mo);
    return mc_outcome(e, expected);
  });
}

// ---- pathint -----------------------------------------------------------------

void pathint_suite(Runner& run) {
  const std::uint64_t seed = run.options().seed;
  run.run("pathint.free_value", [&] {
    const TimeGrid grid(1.0, 1);
    const cplx v = free_integrand_T(grid, 1.0, 0.0, PhaseFunction(grid));
    return measured(std::abs(v - std::exp(-0.5 * std::log(cplx(0.0, 2.0 * kPi)))), run.tol(1e-15));
  });
  for (const int n : {1, 64}) {
    run.run("pathint.free_routes.n" + std::to_string(n), [&, n] {
      NormalSequence rs(seed, 700 + n);
      const TimeGrid grid(1.5, n);
      double dev = 0.0;
      for (int s = 0; s < 5; ++s) {
        const PhaseFunction f = random_function(rs, grid, 0.5, false);
        const RoutePair r = free_integrand_routes(grid, n == 1 ? 1.5 : 1.0, rs.next(), f);
        dev = std::max(dev, r.deviation());
      }
      return measured(dev, run.tol(1e-10));
    });
  }
  run.run("pathint.closed_form_quarter_period", [&] {
    const cplx v = ho_green_closed(1.0, kPi / 2.0, 1.0);
    return measured(std::abs(v - std::polar(1.0 / std::sqrt(2.0 * kPi), -kPi / 4.0)), run.tol(1e-15));
  });
  run.run("pathint.caustic_guard", [&] {
    bool ok = true;
    for (const auto& [k, t] : {std::pair{1.0, kPi}, std::pair{4.0, kPi}, std::pair{1.0, 2.0 * kPi + 5e-10}}) {
      try {
        (void)ho_green_closed(k, t, 0.0);
        ok = false;
      } catch (const CausticError&) {
      }
      try {
        (void)ho_propagator(k, t, 0.0, 8);
        ok = false;
      } catch (const CausticError&) {
      }
    }
    return boolean(ok);
  });
  run.run("pathint.free_limit", [&] {
    double dev = 0.0;
    for (const double t : {0.5, 1.0, 2.0}) {
      for (const double y : {0.0, 1.0}) {
        const cplx free = std::exp(-0.5 * std::log(cplx(0.0, 2.0 * kPi * t)) + kI * y * y / (2.0 * t));
        dev = std::max(dev, std::abs(ho_propagator(1e-12, t, y, 64).grid_value - free));
      }
    }
    return measured(dev, run.tol(1e-5));
  });
  for (const auto& [k, t] : {std::pair{1.0, 1.0}, std::pair{2.0, 2.0}}) {
    double prev = std::numeric_limits<double>::infinity();
    bool monotone = true;
    for (const int n : {64, 128, 256}) {
      std::ostringstream id;
      id << "pathint.ho_green.k" << k << "_t" << t << "_y1.n" << n;
      run.run(id.str(), [&, k = k, t = t, n] {
        const PropagatorValue v = ho_propagator(k, t, 1.0, n);
        monotone = monotone && v.rel_deviation < prev;
        prev = v.rel_deviation;
        // 1e-3 at n = 256, scaled for second-order convergence on coarser grids
        const double scale = std::pow(256.0 / n, 2);
        return measured(v.rel_deviation, run.tol(1e-3) * scale);
      });
    }
    std::ostringstream id;
    id << "pathint.ho_green.k" << k << "_t" << t << "_y1.refinement";
    run.run(id.str(), [&] { return boolean(monotone, "deviation decreases under n-doubling"); });
  }
  run.run("pathint.ho_modulus", [&] {
    double dev = 0.0;
    for (const auto& [k, t] : {std::pair{1.0, 1.0}, std::pair{2.0, 2.0}, std::pair{1.0, 4.0}}) {
      const double expected = 1.0 / std::sqrt(2.0 * kPi * std::abs(std::sin(std::sqrt(k) * t)) / std::sqrt(k));
      dev = std::max(dev, std::abs(std::abs(ho_propagator(k, t, 0.0, 128).grid_value) - expected) / expected);
    }
    return measured(dev, run.tol(1e-3));
  });
  run.run("pathint.ho_closed_transform", [&] {
    // closed-form T at a smooth f against the grid route; t on a cell boundary
    const TimeGrid grid(1.5, 192);
    Vec x(192), p(192);
    for (int i = 0; i < 192; ++i) {
      const double s = grid.node(i);
      x[i] = 0.3 * std::cos(s);
      p[i] = cplx(0.2 * s, 0.1);
    }
    const PhaseFunction f(grid, x, p);
    const cplx lemma = t_transform_gauss(ho_spec(grid, 1.0, 1.0, 0.7), f);
    return measured(std::abs(ho_T_closed(1.0, 1.0, 0.7, f) - lemma) / std::abs(lemma), run.tol(1e-3));
  });
  run.run("pathint.scaled_determinant_identity", [&] {
    const TimeGrid grid(1.5, 8);
    const BlockOperator L = volterra_ho(grid, 1.0, 1.0);
    const Mat R = sqrt_R(grid, 1.0).dense();
    const cplx scaled = linalg::det(Mat::Identity(16, 16) + R * L.dense() * R);
    const cplx direct = det_rel(kinetic_K(grid, 1.0), L);
    return measured(std::abs(scaled - direct) / std::abs(direct), run.tol(1e-10));
  });
  for (const char* which : {"L0", "HO"}) {
    run.run(std::string("pathint.route_equality.") + which, [&, which] {
      NormalSequence rs(seed, which[0] == 'L' ? 720 : 721);
      const TimeGrid grid(1.5, 64);
      const double t = 1.0;
      const BlockOperator L = which[0] == 'L' ? BlockOperator::zero(grid) : volterra_ho(grid, t, 1.0);
      const std::vector<Pinning> pins{Pinning{x_ind(grid, 0.0, t), 0.6}};
      const GaussKernelSpec spec{kinetic_K(grid, t), L, PhaseFunction(grid), pins};
      const PreparedGaussKernel kernel(spec);
      double dev = 0.0;
      for (int s = 0; s < 3; ++s) {
        const PhaseFunction f = random_function(rs, grid, 0.3, false);
        dev = std::max(dev, rel(scaled_quadratic_T_only(grid, t, L, pins, f), kernel.evaluate(f)));
      }
      return measured(dev, run.tol(1e-8));
    });
  }
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"opalg", "gauss", "scaling", "oracle", "pathint", "all"};
  return names;
}

RunReport run_suite(const std::string& name, const SuiteOptions& opt) {
  if (opt.samples < 2) throw InputError("--samples must be at least 2");
  if (opt.dims_min < 1 || opt.dims_max < opt.dims_min) throw InputError("--dims must be a range lo..hi with 1 <= lo <= hi");
  RunReport report(name, opt.seed);
  report.parameters() = {{"samples", opt.samples},
                         {"dims", {opt.dims_min, opt.dims_max}},
                         {"mc_bandwidth", kMcBandwidth}};
  if (opt.tol) report.parameters()["tol"] = *opt.tol;
  Runner run(report, opt);
  const bool all = name == "all";
  bool known = all;
  if (all || name == "opalg") opalg_suite(run), known = true;
  if (all || name == "gauss") gauss_suite(run), known = true;
  if (all || name == "scaling") scaling_suite(run), known = true;
  if (all || name == "oracle") oracle_suite(run), known = true;
  if (all || name == "pathint") pathint_suite(run), known = true;
  if (!known) throw InputError("unknown suite \"" + name + "\"");
  return report;
}

std::vector<CorpusCase> lemma_corpus() {
  std::vector<CorpusCase> out;
  const cplx i = kI;
  {
    const TimeGrid g(1.0, 1);
    out.push_back({"vacuum_n1", GaussKernelSpec::vacuum(g), values(g, {0.3}, {-0.2})});
  }
  {
    const TimeGrid g(1.0, 3);
    GaussKernelSpec s = GaussKernelSpec::vacuum(g);
    s.g = values(g, {0.1 + 0.2 * i, -0.3 * i, 0.05}, {0.2, 0.1 - 0.1 * i, 0.0});
    out.push_back({"vacuum_n3_complex_g", s, values(g, {0.4, -0.1, 0.25}, {-0.3, 0.2, 0.1})});
  }
  {
    const TimeGrid g(1.0, 1);
    GaussKernelSpec s = GaussKernelSpec::vacuum(g);
    s.pinnings.push_back({x_ind(g, 0.0, 1.0), 0.0});
    out.push_back({"donsker_n1_y0", s, PhaseFunction(g)});
  }
  {
    const TimeGrid g(1.0, 2);
    GaussKernelSpec s = GaussKernelSpec::vacuum(g);
    s.pinnings.push_back({x_ind(g, 0.0, 1.0), 0.7});
    out.push_back({"donsker_n2_y0.7", s, values(g, {0.2, -0.4}, {0.1, 0.3})});
  }
  {
    const TimeGrid g(1.0, 3);
    GaussKernelSpec s = GaussKernelSpec::vacuum(g);
    s.pinnings.push_back({x_ind(g, 0.0, 0.7), 0.3});
    s.pinnings.push_back({x_ind(g, 0.3, 1.0) + indicator(g, 0.0, 0.3, Component::p), -0.5});
    out.push_back({"donsker_J2_n3", s, values(g, {0.1, 0.2, -0.1}, {0.3, 0.0, 0.2})});
  }
  {
    const TimeGrid g(1.0, 1);
    out.push_back({"kinetic_n1", kinetic_spec(g, 1.0, 0.4), values(g, {0.3}, {-0.5})});
  }
  {
    const TimeGrid g(2.0, 2);
    out.push_back({"kinetic_n2_window", kinetic_spec(g, 1.0, -0.3), values(g, {0.2, 0.5}, {-0.1, 0.4})});
  }
  {
    const TimeGrid g(1.5, 3);
    out.push_back({"kinetic_n3_t=T", kinetic_spec(g, 1.5, 1.0), values(g, {0.1, -0.2, 0.3}, {0.2, 0.1, -0.3})});
  }
  {
    const TimeGrid g(1.0, 3);
    out.push_back({"kinetic_ho_k1_n3", ho_spec(g, 1.0, 1.0, 0.5), values(g, {0.2, 0.0, -0.1}, {0.1, 0.2, 0.0})});
  }
  {
    const TimeGrid g(1.0, 2);
    GaussKernelSpec s = kinetic_spec(g, 1.0, 0.2);
    s.L = BlockOperator::identity(g);
    out.push_back({"kinetic_damped_n2", s, values(g, {0.3, -0.2}, {0.1, 0.1})});
  }
  {
    const TimeGrid g(1.5, 3);
    GaussKernelSpec s{kinetic_K(g, 1.5), BlockOperator::zero(g), PhaseFunction(g),
                      {Pinning{x_ind(g, 0.0, 0.5), 0.3}, Pinning{x_ind(g, 0.5, 1.0), -0.2}}};
    out.push_back({"kinetic_J2_xpins", s, values(g, {0.1, 0.2, 0.3}, {-0.2, 0.1, 0.0})});
  }
  {
    const TimeGrid g(1.0, 2);
    RMat l(4, 4);
    l << 0.5, 0.1, 0.0, 0.05, 0.1, 0.4, 0.1, 0.0, 0.0, 0.1, 0.3, 0.05, 0.05, 0.0, 0.05, 0.6;
    GaussKernelSpec s{BlockOperator::zero(g), BlockOperator::from_dense(g, l.cast<cplx>()),
                      values(g, {0.2 * i, 0.1}, {-0.1, 0.3 * i}),
                      {Pinning{indicator(g, 0.0, 1.0, Component::p), -0.4}}};
    out.push_back({"quadratic_real_L_g", s, values(g, {0.2, -0.1}, {0.05, 0.1})});
  }
  return out;
}

}  // namespace wnpi

#include "wnpi/oracle.hpp"

#include <cmath>
#include <thread>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "wnpi/gausskernel.hpp"
#include "wnpi/linalg.hpp"
#include "wnpi/rng.hpp"

namespace wnpi {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr long kChunk = 8192;

void require_shapes(const OracleProblem& p) {
  const int m = p.dim();
  if (p.Q.cols() != m || p.b.size() != m) throw InputError("oracle: Q must be m x m and b of length m");
  for (const auto& pin : p.pins) {
    if (pin.v.size() != m) throw InputError("oracle: pinning vector has the wrong length");
  }
  if (int(p.pins.size()) > m) throw InputError("oracle: more pinnings than dimensions");
}

}  // namespace

cplx gauss_log_integral_analytic(const OracleProblem& p) {
  require_shapes(p);
  const int m = p.dim();
  const int J = static_cast<int>(p.pins.size());
  const Mat A = Mat::Identity(m, m) + 0.5 * (p.Q + p.Q.transpose());

  Vec w0 = Vec::Zero(m);
  Mat P = Mat::Identity(m, m);
  double log_det_g = 0.0;
  if (J > 0) {
    RMat V(m, J);
    RVec y(J);
    for (int k = 0; k < J; ++k) {
      V.col(k) = p.pins[k].v;
      y[k] = p.pins[k].y;
    }
    const RMat G = V.transpose() * V;
    Eigen::SelfAdjointEigenSolver<RMat> es(G, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > 1e-12 * std::max(1.0, es.eigenvalues().maxCoeff()))) {
      throw InputError("oracle: pinning vectors are linearly dependent");
    }
    log_det_g = std::log(G.determinant());
    w0 = (V * G.ldlt().solve(y)).cast<cplx>();
    Eigen::HouseholderQR<RMat> qr(V);
    const RMat full = qr.householderQ() * RMat::Identity(m, m);
    P = full.rightCols(m - J).cast<cplx>();
  }

  const Mat a_perp = P.transpose() * A * P;
  const Vec b_perp = P.transpose() * (p.b - A * w0);
  const cplx c0 = -0.5 * (w0.transpose() * A * w0)(0, 0) + (p.b.transpose() * w0)(0, 0);

  cplx quad = 0.0;
  cplx log_det_a = 0.0;
  if (m - J > 0) {
    if (!linalg::has_accretive_real_part(a_perp, 1e-12)) {
      throw MathError("oracle: integrand not integrable (Re(Id + Q) is indefinite on the "
                      "unpinned subspace)");
    }
    linalg::require_invertible(a_perp, "oracle: Id + Q on the unpinned subspace");
    log_det_a = linalg::log_det_eigen(a_perp);
    const Vec sol = a_perp.partialPivLu().solve(b_perp);
    quad = 0.5 * (b_perp.transpose() * sol)(0, 0);
  }
  return p.log_scale - 0.5 * J * kLog2Pi - 0.5 * log_det_g - 0.5 * log_det_a + quad + c0;
}

cplx gauss_integral_analytic(const OracleProblem& p) {
  return std::exp(gauss_log_integral_analytic(p));
}

OracleProblem mollify(const OracleProblem& p, double bandwidth) {
  if (!(bandwidth > 0.0)) throw InputError("oracle: bandwidth must be positive");
  OracleProblem out{p.Q, p.b, {}, p.log_scale};
  const double s2 = bandwidth * bandwidth;
  for (const auto& pin : p.pins) {
    // (2 pi s^2)^{-1/2} exp(-(v^T w - y)^2 / (2 s^2))
    const Vec v = pin.v.cast<cplx>();
    out.Q += (v * v.transpose()) / s2;
    out.b += v * (pin.y / s2);
    out.log_scale += -0.5 * std::log(2.0 * kPi * s2) - pin.y * pin.y / (2.0 * s2);
  }
  return out;
}

bool mc_square_integrable(const OracleProblem& p, double bandwidth) {
  const OracleProblem q = p.pins.empty() ? p : mollify(p, bandwidth);
  const int m = q.dim();
  const RMat re = RMat::Identity(m, m) + (q.Q.real() + q.Q.real().transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(re, Eigen::EigenvaluesOnly);
  return m == 0 || es.eigenvalues().minCoeff() > 1e-9;
}

bool McEstimate::agrees_with(cplx reference, double k) const {
  const double floor = 1e-12 * (1.0 + std::abs(reference));
  return std::abs(value.real() - reference.real()) <= k * stderr_re + floor &&
         std::abs(value.imag() - reference.imag()) <= k * stderr_im + floor;
}

McEstimate mc_expectation(int m, const std::function<cplx(const RVec&)>& F, const McOptions& opt) {
  if (opt.samples < 2) throw InputError("monte carlo: need at least two samples");
  const long chunks = (opt.samples + kChunk - 1) / kChunk;
  struct Sums {
    double re = 0, im = 0, re2 = 0, im2 = 0;
  };
  std::vector<Sums> partial(chunks);

  auto work = [&](long first_chunk, long stride) {
    RVec w(m);
    for (long c = first_chunk; c < chunks; c += stride) {
      Sums s;
      const long end = std::min(opt.samples, (c + 1) * kChunk);
      for (long i = c * kChunk; i < end; ++i) {
        NormalStream(opt.seed, std::uint64_t(i)).fill(w, m);
        const cplx v = F(w);
        s.re += v.real();
        s.im += v.imag();
        s.re2 += v.real() * v.real();
        s.im2 += v.imag() * v.imag();
      }
      partial[c] = s;
    }
  };
  const int threads = std::max(1, std::min<int>(opt.threads, int(chunks)));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
    for (auto& th : pool) th.join();
  }

  Sums total;
  for (const auto& s : partial) {
    total.re += s.re;
    total.im += s.im;
    total.re2 += s.re2;
    total.im2 += s.im2;
  }
  const double n = double(opt.samples);
  McEstimate est;
  est.samples = opt.samples;
  est.value = cplx(total.re / n, total.im / n);
  const double var_re = std::max(0.0, (total.re2 - total.re * total.re / n) / (n - 1.0));
  const double var_im = std::max(0.0, (total.im2 - total.im * total.im / n) / (n - 1.0));
  est.stderr_re = std::sqrt(var_re / n);
  est.stderr_im = std::sqrt(var_im / n);
  return est;
}

McEstimate gauss_integral_mc(const OracleProblem& p, double bandwidth, const McOptions& opt) {
  require_shapes(p);
  const OracleProblem q = mollify(p, bandwidth);
  const Mat qs = 0.5 * (q.Q + q.Q.transpose());
  const int m = q.dim();
  return mc_expectation(
      m,
      [&](const RVec& w) {
        const Vec wc = w.cast<cplx>();
        const cplx e = -0.5 * (wc.transpose() * qs * wc)(0, 0) + (q.b.transpose() * wc)(0, 0);
        return std::exp(e + q.log_scale);
      },
      opt);
}

cplx gauss_integral_quadrature(const OracleProblem& p, int levels) {
  require_shapes(p);
  if (!p.pins.empty()) throw InputError("oracle quadrature: pinnings are not supported");
  if (levels < 1 || levels > 200) throw InputError("oracle quadrature: levels must lie in [1, 200]");
  const int m = p.dim();
  double points = 1.0;
  for (int i = 0; i < m; ++i) points *= levels;
  if (points > 2e7) throw InputError("oracle quadrature: levels^m exceeds 2e7 points");

  // Golub-Welsch for the standard normal weight: Jacobi matrix with off-diagonal sqrt(k).
  RMat jac = RMat::Zero(levels, levels);
  for (int k = 1; k < levels; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(double(k));
  Eigen::SelfAdjointEigenSolver<RMat> es(jac);
  const RVec nodes = es.eigenvalues();
  const RVec weights = es.eigenvectors().row(0).transpose().array().square();

  const Mat qs = 0.5 * (p.Q + p.Q.transpose());
  std::vector<int> idx(m, 0);
  Vec w(m);
  cplx acc = 0.0;
  for (long point = 0; point < long(points); ++point) {
    double weight = 1.0;
    for (int i = 0; i < m; ++i) {
      w[i] = nodes[idx[i]];
      weight *= weights[idx[i]];
    }
    acc += weight * std::exp(-0.5 * (w.transpose() * qs * w)(0, 0) + (p.b.transpose() * w)(0, 0));
    for (int i = 0; i < m && ++idx[i] == levels; ++i) idx[i] = 0;
  }
  return std::exp(p.log_scale) * acc;
}

Vec wick_power(const Vec& omega, int n) {
  const int m = static_cast<int>(omega.size());
  Vec prev = Vec::Ones(1);  // order 0
  if (n == 0) return prev;
  Vec cur = omega;  // order 1
  Vec id(Eigen::Index(m) * m);
  id.setZero();
  for (int i = 0; i < m; ++i) id[i * m + i] = 1.0;
  for (int k = 1; k < n; ++k) {
    Vec next = tensor::symmetrize(tensor::outer(omega, cur), m, k + 1) -
               double(k) * tensor::symmetrize(tensor::outer(id, prev), m, k + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

cplx wick_eval(const DenseChaos& phi, const Vec& omega) {
  if (omega.size() != phi.dim()) throw InputError("wick_eval: point has the wrong dimension");
  cplx acc = 0.0;
  for (int n = 0; n <= phi.n_max(); ++n) acc += tensor::pair(phi.kernel(n), wick_power(omega, n));
  return acc;
}

OracleCase problem_from_spec(const GaussKernelSpec& spec, const PhaseFunction& f) {
  require_same_grid(spec.grid(), f.grid());
  const int m = 2 * spec.grid().n();
  if (m > 12) throw InputError("oracle: grid too large (2n must not exceed 12)");
  OracleCase c;
  c.numerator.Q = (spec.K + spec.L).dense();
  c.numerator.b = kI * (f + spec.g).coords();
  for (const auto& pin : spec.pinnings) {
    if (!pin.eta.is_real()) throw InputError("oracle: pinning vectors must be real");
    c.numerator.pins.push_back({pin.eta.coords().real(), pin.y});
  }
  c.normalizer.Q = spec.K.dense();
  c.normalizer.b = Vec::Zero(m);
  return c;
}

cplx oracle_T(const GaussKernelSpec& spec, const PhaseFunction& f) {
  const OracleCase c = problem_from_spec(spec, f);
  return std::exp(gauss_log_integral_analytic(c.numerator) -
                  gauss_log_integral_analytic(c.normalizer));
}

MagicReport verify_magicformula(const GaussKernelSpec& spec, const PhaseFunction& f) {
  MagicReport r;
  r.oracle = oracle_T(spec, f);
  const GaussTerms terms = PreparedGaussKernel(spec).terms(f);
  const cplx plus = std::exp(terms.log_value(+1));
  const cplx minus = std::exp(terms.log_value(-1));
  r.deviation_plus = std::abs(plus - r.oracle);
  r.deviation_minus = std::abs(minus - r.oracle);
  r.resolved_sign = r.deviation_plus <= r.deviation_minus ? +1 : -1;
  r.lemma = plus;
  r.abs_deviation = r.deviation_plus;
  r.rel_deviation = r.abs_deviation / std::max(std::abs(r.oracle), 1e-300);
  return r;
}

}  // namespace wnpi

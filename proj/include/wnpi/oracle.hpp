#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "wnpi/chaos.hpp"
#include "wnpi/common.hpp"

namespace wnpi {

struct GaussKernelSpec;
class PhaseFunction;

/// Constraint delta(v^T w - y).
struct OraclePin {
  RVec v;
  double y = 0.0;
};

/// Z = e^{log_scale} * E[ exp(-1/2 w^T Q w + b^T w) * prod_k delta(v_k^T w - y_k) ],
/// with w standard normal in R^m.
struct OracleProblem {
  Mat Q;
  Vec b;
  std::vector<OraclePin> pins;
  cplx log_scale = 0.0;

  int dim() const { return static_cast<int>(Q.rows()); }
};

/// log Z in closed form. Pinnings are removed by exact Gaussian conditioning
/// on the affine subspace V^T w = y; the remaining integral over its
/// orthogonal complement is the standard complex Gaussian formula with
/// det^{-1/2} on the damping-continued branch (principal eigenvalue logs).
/// Requires Re(Id + Q) positive semidefinite on that complement.
cplx gauss_log_integral_analytic(const OracleProblem& p);
cplx gauss_integral_analytic(const OracleProblem& p);

/// Replaces each delta by a normal density of width `bandwidth`; the result
/// has no pinnings.
OracleProblem mollify(const OracleProblem& p, double bandwidth);

/// True if the (mollified) integrand has finite variance under the
/// standard Gaussian, i.e. Id + 2 Re Q is positive definite.
bool mc_square_integrable(const OracleProblem& p, double bandwidth);

struct McOptions {
  std::uint64_t seed = 0;
  long samples = 1'000'000;
  int threads = 1;
};

struct McEstimate {
  cplx value;
  double stderr_re = 0.0;
  double stderr_im = 0.0;
  long samples = 0;

  /// |Re| and |Im| deviations each within k standard errors (plus a floor
  /// for zero-variance components).
  bool agrees_with(cplx reference, double k = 3.0) const;
};

/// Monte Carlo mean of F(w) for w standard normal in R^m. Samples are drawn
/// from Philox streams keyed by (seed, sample index) and reduced in fixed
/// chunks, so the estimate does not depend on the thread count.
McEstimate mc_expectation(int m, const std::function<cplx(const RVec&)>& F, const McOptions& opt);

/// Monte Carlo estimate of the mollified problem.
McEstimate gauss_integral_mc(const OracleProblem& p, double bandwidth, const McOptions& opt);

/// Tensor Gauss-Hermite rule with `levels` nodes per axis. Pin-free
/// problems only; accurate when Re(Id + Q) is well inside the positive cone.
cplx gauss_integral_quadrature(const OracleProblem& p, int levels);

/// sum_n <phi^(n), :w^{tensor n}:> with Wick powers from the Hermite
/// recursion :w^{n+1}: = w (x) :w^n: - n Id (x) :w^{n-1}: (symmetrized).
/// w may be complex.
cplx wick_eval(const DenseChaos& phi, const Vec& omega);

/// Wick power :w^{tensor n}: as a symmetric flattened tensor.
Vec wick_power(const Vec& omega, int n);

/// Oracle form of a Gauss kernel T-transform: the numerator integrates
/// exp(-1/2 <w,(K+L)w> + i<w, f+g>) against the pinnings, the denominator
/// exp(-1/2 <w,Kw>) (the Nexp normalization).
struct OracleCase {
  OracleProblem numerator;
  OracleProblem normalizer;
};
OracleCase problem_from_spec(const GaussKernelSpec& spec, const PhaseFunction& f);

/// exp(log Z(numerator) - log Z(normalizer)).
cplx oracle_T(const GaussKernelSpec& spec, const PhaseFunction& f);

struct MagicReport {
  cplx lemma;            // implemented formula (resolved sign)
  cplx oracle;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
  double deviation_plus = 0.0;   // |formula(+1/2 u M^-1 u) - oracle|
  double deviation_minus = 0.0;  // |formula(-1/2 u M^-1 u) - oracle|
  int resolved_sign = +1;        // sign of the pinning quadratic favoured by the oracle
};

/// Evaluates the Lemma formula and the oracle on one (spec, f) pair. The
/// grid must be small enough for the oracle (2n <= 12).
MagicReport verify_magicformula(const GaussKernelSpec& spec, const PhaseFunction& f);

}  // namespace wnpi

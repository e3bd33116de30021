#pragma once

#include <functional>
#include <vector>

#include <Eigen/LU>

#include "wnpi/opalg.hpp"

namespace wnpi {

/// One delta pinning delta(<eta, .> - y). eta must be real-valued.
struct Pinning {
  PhaseFunction eta;
  double y = 0.0;
};

/// Generalized Gauss kernel
///   Nexp(-1/2 <., K .>) * exp(-1/2 <., L .> + i <., g>) * prod_k delta(<eta_k, .> - y_k).
struct GaussKernelSpec {
  BlockOperator K;
  BlockOperator L;
  PhaseFunction g;
  std::vector<Pinning> pinnings;

  /// K = L = 0, g = 0, no pinnings.
  static GaussKernelSpec vacuum(const TimeGrid& grid);
  const TimeGrid& grid() const { return K.grid(); }
};

/// The three pieces of log T(f): the log prefactor, the Gaussian exponent
/// -1/2 <h, N^{-1} h> and the unsigned pinning quadratic 1/2 u^T M^{-1} u,
/// with h = f + g and u_k = i y_k + <eta_k, N^{-1} h>.
struct GaussTerms {
  cplx log_prefactor;
  cplx gaussian;
  cplx pinning_quadratic;

  /// log T(f) with the given sign in front of the pinning quadratic.
  cplx log_value(int pinning_sign = +1) const {
    return log_prefactor + gaussian + double(pinning_sign) * pinning_quadratic;
  }
};

/// Factorized kernel: N = Id + K + L and M_{N^-1} are decomposed once, so
/// repeated evaluation costs one solve per test function.
///
/// The constructor checks every hypothesis: Id + K and N invertible, eta_k
/// real and non-zero, and M = (<eta_i, N^{-1} eta_j>) either with positive
/// definite symmetric real part or purely imaginary and invertible.
///
/// The prefactor (2 pi)^{-J/2} det(M)^{-1/2} det_rel(K, L)^{-1/2} uses the
/// damping-continued logarithms of det M, det N and det(Id + K).
class PreparedGaussKernel {
 public:
  explicit PreparedGaussKernel(GaussKernelSpec spec);

  const GaussKernelSpec& spec() const { return spec_; }
  const TimeGrid& grid() const { return spec_.grid(); }
  int pin_count() const { return static_cast<int>(spec_.pinnings.size()); }

  cplx log_prefactor() const { return log_prefactor_; }
  const Mat& pinning_matrix() const { return m_; }
  cplx log_det_rel() const { return log_det_rel_; }

  GaussTerms terms(const PhaseFunction& f) const;
  /// Same kernel with the pinning values replaced by ys.
  GaussTerms terms(const PhaseFunction& f, const std::vector<double>& ys) const;

  cplx evaluate(const PhaseFunction& f) const;
  cplx evaluate(const PhaseFunction& f, const std::vector<double>& ys) const;

 private:
  GaussKernelSpec spec_;
  Eigen::PartialPivLU<Mat> n_lu_;
  Mat n_inv_eta_;  // coords of N^{-1} eta_k, one column per pinning
  Mat m_;
  Eigen::PartialPivLU<Mat> m_lu_;
  Vec g_coords_;
  cplx log_det_rel_;
  cplx log_prefactor_;
};

/// T-transform of the generalized Gauss kernel at f.
cplx t_transform_gauss(const GaussKernelSpec& spec, const PhaseFunction& f);

/// t_transform_gauss(spec, 0).
cplx generalized_expectation(const GaussKernelSpec& spec);

/// T-transform of Donsker's delta delta(<eta, .> - x):
///   (2 pi <eta,eta>)^{-1/2} exp(-(i<eta,f> - x)^2 / (2<eta,eta>) - <f,f>/2).
cplx t_transform_donsker(const PhaseFunction& eta, double x, const PhaseFunction& f);

/// The Donsker formula in terms of the pairings a = <eta,eta>, b = <eta,f>,
/// c = <f,f>; valid for complex eta (principal branch of a^{-1/2}).
cplx donsker_from_pairings(cplx a, cplx b, cplx c, double x);

/// T-transform of Nexp(-1/2 <., K .>): exp(-1/2 <f, (Id + K)^{-1} f>).
cplx normalized_exp_T(const BlockOperator& K, const PhaseFunction& f);

struct GrotexReport {
  cplx lhs;           // oracle: E[exp(-<w, K w>)]
  cplx rhs;           // det(Id + 2K)^{-1/2}
  cplx tg_oracle;     // oracle: E[exp(-1/2 <w, K w> + i <w, f>)]
  cplx tg_formula;    // det(Id + K)^{-1/2} exp(-1/2 <f, (Id + K)^{-1} f>)
  double mass_deviation() const { return std::abs(lhs - rhs); }
  double transform_deviation() const { return std::abs(tg_oracle - tg_formula); }
};

/// Finite-dimensional instance of the classical square-integrable Gauss
/// kernel exp(-1/2 <., K .>) for a real symmetric K with -1/2 < K <= 0.
/// f is given in coordinates (length K.rows()).
GrotexReport grotex_check(const RMat& K, const Vec& f);

struct UReport {
  double C = 0.0;              // |F(0 * f)|
  double D = 0.0;              // minimal growth rate given C
  bool finite = true;          // every sample finite and C, D finite
  int violations = 0;          // samples breaking |F(zf)| <= C exp(D |z|^2 |f|^2)
  double max_cr_residual = 0;  // relative Cauchy-Riemann residual on the disc grid
};

struct UCheckOptions {
  double disc_radius = 1.0;
  int disc_points = 5;   // per axis of the square grid clipped to the disc
  double step = 1e-4;    // central-difference step
};

/// Numerical U-functional check of F along the ray z f and the complex line
/// lambda f + g.
UReport check_u_functional(const std::function<cplx(const PhaseFunction&)>& F,
                           const PhaseFunction& f, const PhaseFunction& g,
                           const std::vector<cplx>& z_samples, const UCheckOptions& opt = {});

/// Samples on concentric rings |z| = r_j, j = 1..rings, r_rings = radius.
std::vector<cplx> disc_samples(double radius, int rings, int per_ring);

}  // namespace wnpi

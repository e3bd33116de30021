#include "wnpi/linalg.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace wnpi::linalg {

namespace {

constexpr Eigen::Index kEigenBranchLimit = 96;

}  // namespace

cplx log_det_mod_2pi(const Mat& a) {
  Eigen::PartialPivLU<Mat> lu(a);
  const Mat& u = lu.matrixLU();
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < u.rows(); ++i) {
    if (u(i, i) == cplx(0.0)) throw SingularError("log_det: matrix is singular", 0.0);
    acc += std::log(u(i, i));
  }
  if (lu.permutationP().determinant() < 0) acc += cplx(0.0, kPi);
  return acc;
}

namespace {

// Sum of Arg(d_k) over the pivots of an unpivoted symmetric LDL^T of a + eps*Id.
// Returns false when a pivot vanishes numerically.
bool damped_pivot_phase(const Mat& a, double eps, double& phase, double& log_abs) {
  Mat w = a;
  const Eigen::Index m = w.rows();
  for (Eigen::Index i = 0; i < m; ++i) w(i, i) += eps;
  phase = 0.0;
  log_abs = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    const cplx d = w(k, k);
    if (std::abs(d) == 0.0 || !std::isfinite(std::abs(d))) return false;
    phase += std::arg(d);
    log_abs += std::log(std::abs(d));
    const Eigen::Index rest = m - k - 1;
    if (rest == 0) break;
    Vec col = w.col(k).tail(rest);
    w.bottomRightCorner(rest, rest).noalias() -= (col / d) * col.transpose();
  }
  return true;
}

}  // namespace

cplx det(const Mat& a) {
  if (a.rows() == 0) return 1.0;
  return Eigen::PartialPivLU<Mat>(a).determinant();
}

double rcond(const Mat& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::PartialPivLU<Mat> lu(a);
  const double r = lu.rcond();
  return std::isfinite(r) ? r : 0.0;
}

double max_abs(const Mat& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

bool is_symmetric(const Mat& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.transpose()) <= tol * std::max(1.0, max_abs(a));
}

bool has_accretive_real_part(const Mat& a, double rel_tol) {
  const RMat re = 0.5 * (a.real() + a.real().transpose());
  const double scale = std::max(1.0, re.cwiseAbs().maxCoeff());
  RMat shifted = re + rel_tol * scale * RMat::Identity(re.rows(), re.cols());
  Eigen::LLT<RMat> llt(shifted);
  return llt.info() == Eigen::Success;
}

void require_invertible(const Mat& a, const std::string& what, double threshold) {
  const double r = rcond(a);
  if (!(r >= threshold)) throw SingularError(what + " is singular or ill-conditioned", r);
}

cplx log_det_eigen(const Mat& a) {
  if (a.rows() == 0) return 0.0;
  Eigen::ComplexEigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw MathError("log_det: eigenvalue solver did not converge");
  const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  cplx acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx lam = es.eigenvalues()[i];
    if (std::abs(lam) <= 1e-300) throw SingularError("log_det: zero eigenvalue", 0.0);
    if (lam.real() < 0.0 && std::abs(lam.imag()) <= 1e-12 * scale) {
      std::ostringstream os;
      os << "log_det: eigenvalue " << lam.real()
         << " lies on the negative real axis; the square-root branch is undefined";
      throw MathError(os.str());
    }
    acc += std::log(lam);
  }
  return acc;
}

cplx log_det_continued(const Mat& a) {
  if (a.rows() != a.cols()) throw InputError("log_det: matrix is not square");
  if (a.rows() == 0) return 0.0;
  const cplx lu_log = log_det_mod_2pi(a);

  double reference = 0.0;
  bool have_reference = false;
  if (a.rows() > kEigenBranchLimit && is_symmetric(a, 1e-10) && has_accretive_real_part(a)) {
    const double eps = 1e-10 * std::max(1.0, max_abs(a));
    double phase = 0.0;
    double log_abs = 0.0;
    if (damped_pivot_phase(a, eps, phase, log_abs)) {
      // Accept the pivot phase only if it reproduces the LU determinant.
      const double wrapped = std::remainder(phase - lu_log.imag(), 2.0 * kPi);
      if (std::abs(log_abs - lu_log.real()) < 1e-3 * (1.0 + std::abs(lu_log.real())) &&
          std::abs(wrapped) < 1e-3) {
        reference = phase;
        have_reference = true;
      }
    }
  }
  if (!have_reference) reference = log_det_eigen(a).imag();

  const double turns = std::round((reference - lu_log.imag()) / (2.0 * kPi));
  return {lu_log.real(), lu_log.imag() + 2.0 * kPi * turns};
}

}  // namespace wnpi::linalg

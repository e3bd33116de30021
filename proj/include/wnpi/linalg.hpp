#pragma once

#include "wnpi/common.hpp"

namespace wnpi::linalg {

/// Logarithm of det(a) on the branch obtained by continuing a + eps*Id from
/// eps = +inf down to eps = 0. Equivalently: the sum of principal logarithms
/// of the eigenvalues of a. Throws MathError if a is singular or an eigenvalue
/// lies on the negative real axis (the continuation path then passes through
/// a zero of the determinant).
///
/// Magnitude and phase (mod 2 pi) come from a partially pivoted LU; the
/// 2 pi winding comes from the eigenvalues, or for large complex-symmetric
/// matrices with positive semidefinite real part from the pivots of an
/// unpivoted LDL^T of a slightly damped copy (all such pivots lie in the open
/// right half plane).
cplx log_det_continued(const Mat& a);

/// log det(a) from a partially pivoted LU; the imaginary part is only
/// defined mod 2 pi.
cplx log_det_mod_2pi(const Mat& a);

/// Principal-branch eigenvalue log sum. Small matrices only.
cplx log_det_eigen(const Mat& a);

/// det(a) from a partially pivoted LU.
cplx det(const Mat& a);

/// Reciprocal condition number estimate (1-norm) of a square matrix.
double rcond(const Mat& a);

bool is_symmetric(const Mat& a, double tol);

/// True if the real part of the symmetric part of a is positive semidefinite
/// up to a relative tolerance.
bool has_accretive_real_part(const Mat& a, double rel_tol = 1e-12);

/// Reject with SingularError when rcond(a) < threshold.
void require_invertible(const Mat& a, const std::string& what, double threshold = 1e-12);

/// max_ij |a_ij|
double max_abs(const Mat& a);

}  // namespace wnpi::linalg

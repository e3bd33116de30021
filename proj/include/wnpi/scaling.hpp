#pragma once

#include <functional>

#include "wnpi/chaos.hpp"
#include "wnpi/gausskernel.hpp"

namespace wnpi {

/// An S-transform given as a function of the coordinate vector xi.
using SFunctional = std::function<cplx(const Vec&)>;

/// Generalized trace tr_B = sum_i B e_i (x) e_i as an order-2 kernel; its
/// (a, b) entry is <e_a, B e_b>, so tr_B(xi (x) eta) = <xi, B eta>.
Mat trace_kernel(const Mat& B);
Mat trace_kernel(const BlockOperator& B);

/// Kernels of sigma_B phi = phi(B .):
///   phi_B^(n) = sum_k (n+2k)!/(k! n!) (-1/2)^k (B^T)^{(x)n} tr^k_{Id - B B^T} phi^(n+2k).
/// B^T is the transpose (the adjoint for the bilinear pairing). The kernels
/// of phi must be symmetric; symmetry is preserved without re-symmetrizing.
DenseChaos sigma_dense(const Mat& B, const DenseChaos& phi);

/// w :e^<xi,.>: -> w exp(1/2 (<B^T xi, B^T xi> - <xi, xi>)) :e^<B^T xi,.>:.
CoherentChaos sigma_coherent(const Mat& B, const CoherentChaos& phi);

/// sum_n <phi^(n), xi^{(x)n}>.
cplx s_transform(const DenseChaos& phi, const Vec& xi);
/// sum_j w_j exp(<xi_j, xi>).
cplx s_transform(const CoherentChaos& phi, const Vec& xi);
/// S Phi(xi) = T Phi(-i xi) exp(-1/2 <xi, xi>) for a Gauss kernel spec.
cplx s_transform(const PreparedGaussKernel& phi, const PhaseFunction& xi);

/// T Psi(f) = S Psi(i f) exp(-1/2 <f, f>).
cplx t_from_s(const SFunctional& S, const Vec& f);

/// S(Phi_{B B^T})(xi) = exp(-1/2 <xi, (Id - B B^T) xi>), the S-transform of sigma_B^dagger 1.
cplx gauss_kernel_S(const Mat& B, const Vec& xi);

/// S(sigma_B^dagger Phi)(xi) = exp(-1/2 <xi, (Id - B B^T) xi>) * S Phi(B^T xi).
cplx sigma_dual_S(const Mat& B, const SFunctional& S, const Vec& xi);

/// S(Phi_{B B^T} <> Gamma_{B^T} Psi)(xi): Wick product of the Gauss kernel
/// with Psi pulled back by B^T, Gamma_{B^T} acting only through S.
cplx wick_gamma_S(const Mat& B, const SFunctional& S, const Vec& xi);

SFunctional as_s_functional(const CoherentChaos& phi);
SFunctional as_s_functional(const DenseChaos& phi);

}  // namespace wnpi

#pragma once

#include <optional>

#include "wnpi/gausskernel.hpp"

namespace wnpi {

/// Throws CausticError when sqrt(k) t is within 1e-9 of m pi, m >= 1, and
/// InputError for k < 0 or t <= 0.
void caustic_guard(double k, double t);

/// Oscillator Green's function
///   sqrt(sqrt(k) / (2 pi i sin(sqrt(k) t))) exp(i sqrt(k) y^2 / (2 tan(sqrt(k) t))),
/// with the k -> 0 limit sqrt(1/(2 pi i t)) exp(i y^2 / (2t)). The square root
/// is principal for sqrt(k) t < pi and picks up a factor e^{-i pi/2} per
/// caustic passed beyond that.
cplx ho_green_closed(double k, double t, double y);

/// Free integrand T-transform at f, pinned at x(t) = y; evaluated through
/// the Gauss kernel with K = kinetic_K and through the scaled Donsker delta
/// with R eta and R f. Throws InvariantError if the two differ by more than
/// 1e-8 (relative to the value scale).
cplx free_integrand_T(const TimeGrid& grid, double t, double y, const PhaseFunction& f);

/// Both routes of free_integrand_T, for reporting.
struct RoutePair {
  cplx lemma;
  cplx scaled;
  double deviation() const { return std::abs(lemma - scaled); }
};
RoutePair free_integrand_routes(const TimeGrid& grid, double t, double y, const PhaseFunction& f);

/// Oscillator kernel: K = kinetic_K, L = [[i k A, 0], [0, 0]], g = 0 and the
/// single pinning <(1_[0,t), 0), .> = y of the path endpoint.
GaussKernelSpec ho_spec(const TimeGrid& grid, double t, double k, double y);

/// Closed-form oscillator T-transform at f: the Green's function prefactor,
/// the Gaussian factor with the explicit inverse of N on [0, t) (blocks
/// -i Q, -i Q, -i Q, -i k A Q with Q = (k A - 1)^{-1}, dense solve on the
/// active cells) and the identity on the complement, and the pinning factor
/// exp(1/2 sqrt(k) / (i tan(sqrt(k) t)) u^2) with u = i y + <eta, N^{-1} f>.
cplx ho_T_closed(double k, double t, double y, const PhaseFunction& f);

struct PropagatorValue {
  cplx grid_value;
  cplx closed_form;
  double abs_deviation = 0.0;
  double rel_deviation = 0.0;
};

/// Generalized expectation of ho_spec on grid(t, n) against the closed form.
PropagatorValue ho_propagator(double k, double t, double y, int n);

/// Same, reusing one factorization for several endpoints.
std::vector<PropagatorValue> ho_propagator_table(double k, double t, const std::vector<double>& ys,
                                                 int n);

/// T-transform of sigma_R^dagger sigma_R (exp(-1/2 <., L .>) delta) at f via
/// the scaled route: K = 0, L' = R L R, eta' = R eta, f' = R f. The
/// prefactor det(Id + R L R)^{-1/2} det(M')^{-1/2} is continued in the
/// coupling tau L, tau: 0 -> 1, from the free value.
cplx scaled_quadratic_T_only(const TimeGrid& grid, double t, const BlockOperator& L,
                             const std::vector<Pinning>& pinnings, const PhaseFunction& f);

/// scaled_quadratic_T_only checked against t_transform_gauss with K =
/// kinetic_K; throws InvariantError beyond 1e-8 relative deviation.
cplx scaled_quadratic_T(const TimeGrid& grid, double t, const BlockOperator& L,
                        const std::vector<Pinning>& pinnings, const PhaseFunction& f);

}  // namespace wnpi

#pragma once

#include <vector>

#include "wnpi/common.hpp"

namespace wnpi {

/// Uniform midpoint discretization of the ambient window [0, t_ambient].
///
/// Functions over the grid are piecewise constant on the n cells; cell i
/// carries the midpoint node (i + 1/2) * dt.
class TimeGrid {
 public:
  TimeGrid(double t_ambient, int n);

  double t_ambient() const { return t_ambient_; }
  int n() const { return n_; }
  double dt() const { return t_ambient_ / n_; }
  double node(int i) const { return (i + 0.5) * dt(); }
  std::vector<double> nodes() const;

  /// Number of leading cells whose midpoint lies in [0, t).
  int cells_below(double t) const;

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.t_ambient_ == b.t_ambient_ && a.n_ == b.n_;
  }

 private:
  double t_ambient_;
  int n_;
};

TimeGrid make_grid(double t_ambient, int n);

/// Throws InputError unless both objects live on the same grid.
void require_same_grid(const TimeGrid& a, const TimeGrid& b);

/// Throws InputError unless 0 < t <= t_ambient.
void require_in_window(const TimeGrid& grid, double t);

enum class Component { x, p };

/// A discretized element of L^2([0, T]; C^2): values of the position and
/// momentum components on each cell.
class PhaseFunction {
 public:
  explicit PhaseFunction(const TimeGrid& grid);
  PhaseFunction(const TimeGrid& grid, Vec x_part, Vec p_part);

  /// Rebuilds a function from the stacked value vector [x; p].
  static PhaseFunction from_stacked(const TimeGrid& grid, const Vec& stacked);
  /// Rebuilds a function from orthonormal-basis coordinates sqrt(dt) * [x; p].
  static PhaseFunction from_coords(const TimeGrid& grid, const Vec& coords);

  const TimeGrid& grid() const { return grid_; }
  const Vec& x_part() const { return x_; }
  const Vec& p_part() const { return p_; }

  Vec stacked() const;
  /// Coordinates in the orthonormal basis 1_cell / sqrt(dt); the bilinear
  /// pairing becomes the plain (unconjugated) dot product.
  Vec coords() const;

  bool is_real(double tol = 0.0) const;
  double l2_norm() const;

  PhaseFunction& operator+=(const PhaseFunction& other);
  PhaseFunction& operator-=(const PhaseFunction& other);
  PhaseFunction& operator*=(cplx s);

  friend PhaseFunction operator+(PhaseFunction a, const PhaseFunction& b) { return a += b; }
  friend PhaseFunction operator-(PhaseFunction a, const PhaseFunction& b) { return a -= b; }
  friend PhaseFunction operator*(cplx s, PhaseFunction a) { return a *= s; }
  friend PhaseFunction operator*(PhaseFunction a, cplx s) { return a *= s; }

 private:
  TimeGrid grid_;
  Vec x_;
  Vec p_;
};

/// 1 on cells whose midpoint lies in [a, b), 0 elsewhere, in one component.
PhaseFunction indicator(const TimeGrid& grid, double a, double b, Component component);

/// <f, g> = sum_i (f.x_i g.x_i + f.p_i g.p_i) dt, without complex conjugation.
cplx pair_bilinear(const PhaseFunction& f, const PhaseFunction& g);

/// n x n matrix of the double Volterra operator
///   (A f)(s) = 1_[0,t)(s) int_s^t int_0^tau f(r) dr dtau
///            = 1_[0,t)(s) int_0^t (t - max(s, r)) f(r) dr
/// acting on cell values, by the composite midpoint rule: entry (i, j) is
/// dt * (t - max(s_i, s_j)) for active nodes. The kernel is symmetric, so
/// the matrix is exactly symmetric, and its trace equals int_0^t (t - s) ds.
RMat volterra_A(const TimeGrid& grid, double t);

}  // namespace wnpi

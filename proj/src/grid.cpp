#include "wnpi/grid.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wnpi {

TimeGrid::TimeGrid(double t_ambient, int n) : t_ambient_(t_ambient), n_(n) {
  if (!(t_ambient > 0.0) || !std::isfinite(t_ambient)) {
    throw InputError("grid: t_ambient must be positive and finite");
  }
  if (n < 1) {
    throw InputError("grid: n must be at least 1");
  }
}

std::vector<double> TimeGrid::nodes() const {
  std::vector<double> out(n_);
  for (int i = 0; i < n_; ++i) out[i] = node(i);
  return out;
}

int TimeGrid::cells_below(double t) const {
  // node(i) < t  <=>  i < t/dt - 1/2
  int count = 0;
  while (count < n_ && node(count) < t) ++count;
  return count;
}

TimeGrid make_grid(double t_ambient, int n) { return TimeGrid(t_ambient, n); }

void require_same_grid(const TimeGrid& a, const TimeGrid& b) {
  if (!(a == b)) {
    std::ostringstream os;
    os << "grid mismatch: (" << a.t_ambient() << ", " << a.n() << ") vs (" << b.t_ambient()
       << ", " << b.n() << ")";
    throw InputError(os.str());
  }
}

void require_in_window(const TimeGrid& grid, double t) {
  if (!(t > 0.0) || t > grid.t_ambient()) {
    std::ostringstream os;
    os << "time " << t << " outside the window (0, " << grid.t_ambient() << "]";
    throw InputError(os.str());
  }
}

namespace {

void require_finite(const Vec& v, const char* what) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag())) {
      throw InputError(std::string("phase function: non-finite entry in ") + what);
    }
  }
}

}  // namespace

PhaseFunction::PhaseFunction(const TimeGrid& grid)
    : grid_(grid), x_(Vec::Zero(grid.n())), p_(Vec::Zero(grid.n())) {}

PhaseFunction::PhaseFunction(const TimeGrid& grid, Vec x_part, Vec p_part)
    : grid_(grid), x_(std::move(x_part)), p_(std::move(p_part)) {
  if (x_.size() != grid_.n() || p_.size() != grid_.n()) {
    throw InputError("phase function: component length does not match grid size");
  }
  require_finite(x_, "x_part");
  require_finite(p_, "p_part");
}

PhaseFunction PhaseFunction::from_stacked(const TimeGrid& grid, const Vec& stacked) {
  const int n = grid.n();
  if (stacked.size() != 2 * n) {
    throw InputError("phase function: stacked vector has wrong length");
  }
  return PhaseFunction(grid, stacked.head(n), stacked.tail(n));
}

PhaseFunction PhaseFunction::from_coords(const TimeGrid& grid, const Vec& coords) {
  return from_stacked(grid, coords / std::sqrt(grid.dt()));
}

Vec PhaseFunction::stacked() const {
  Vec out(2 * grid_.n());
  out << x_, p_;
  return out;
}

Vec PhaseFunction::coords() const { return stacked() * std::sqrt(grid_.dt()); }

bool PhaseFunction::is_real(double tol) const {
  return x_.imag().cwiseAbs().maxCoeff() <= tol && p_.imag().cwiseAbs().maxCoeff() <= tol;
}

double PhaseFunction::l2_norm() const {
  return std::sqrt((x_.squaredNorm() + p_.squaredNorm()) * grid_.dt());
}

PhaseFunction& PhaseFunction::operator+=(const PhaseFunction& other) {
  require_same_grid(grid_, other.grid_);
  x_ += other.x_;
  p_ += other.p_;
  return *this;
}

PhaseFunction& PhaseFunction::operator-=(const PhaseFunction& other) {
  require_same_grid(grid_, other.grid_);
  x_ -= other.x_;
  p_ -= other.p_;
  return *this;
}

PhaseFunction& PhaseFunction::operator*=(cplx s) {
  x_ *= s;
  p_ *= s;
  return *this;
}

PhaseFunction indicator(const TimeGrid& grid, double a, double b, Component component) {
  if (!(a >= 0.0) || !(b >= a) || b > grid.t_ambient()) {
    std::ostringstream os;
    os << "indicator: need 0 <= a <= b <= " << grid.t_ambient() << ", got [" << a << ", " << b
       << ")";
    throw InputError(os.str());
  }
  Vec v = Vec::Zero(grid.n());
  for (int i = 0; i < grid.n(); ++i) {
    const double s = grid.node(i);
    if (s >= a && s < b) v[i] = 1.0;
  }
  if (component == Component::x) return PhaseFunction(grid, v, Vec::Zero(grid.n()));
  return PhaseFunction(grid, Vec::Zero(grid.n()), v);
}

cplx pair_bilinear(const PhaseFunction& f, const PhaseFunction& g) {
  require_same_grid(f.grid(), g.grid());
  cplx acc = 0.0;
  for (int i = 0; i < f.grid().n(); ++i) {
    acc += f.x_part()[i] * g.x_part()[i] + f.p_part()[i] * g.p_part()[i];
  }
  return acc * f.grid().dt();
}

RMat volterra_A(const TimeGrid& grid, double t) {
  require_in_window(grid, t);
  const int n = grid.n();
  const int active = grid.cells_below(t);
  const double dt = grid.dt();
  RMat a = RMat::Zero(n, n);
  for (int i = 0; i < active; ++i) {
    const double si = grid.node(i);
    for (int j = 0; j < active; ++j) {
      const double sj = grid.node(j);
      a(i, j) = dt * (t - std::max(si, sj));
    }
  }
  return a;
}

}  // namespace wnpi

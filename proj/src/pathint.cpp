#include "wnpi/pathint.hpp"

#include <cmath>
#include <sstream>

#include "wnpi/linalg.hpp"

namespace wnpi {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;
constexpr double kRouteTolerance = 1e-8;

// sqrt(k) / sin(sqrt(k) t) and sqrt(k) / tan(sqrt(k) t), with their k -> 0 limits.
double sk_over_sin(double k, double t) {
  if (k == 0.0) return 1.0 / t;
  const double s = std::sqrt(k);
  return s / std::sin(s * t);
}

double sk_over_tan(double k, double t) {
  if (k == 0.0) return 1.0 / t;
  const double s = std::sqrt(k);
  return s / std::tan(s * t);
}

// log of sqrt(sqrt(k) / (2 pi i sin(sqrt(k) t))) continued through caustics.
cplx log_ho_prefactor(double k, double t) {
  const double q = sk_over_sin(k, t);
  const double passed = k == 0.0 ? 0.0 : std::floor(std::sqrt(k) * t / kPi);
  return {0.5 * (std::log(std::abs(q)) - kLog2Pi), -kPi / 4.0 - passed * kPi / 2.0};
}

void require_route_agreement(cplx a, cplx b, const char* what) {
  const double dev = std::abs(a - b);
  if (!(dev <= kRouteTolerance * std::max(1.0, std::abs(a)))) {
    std::ostringstream os;
    os << what << ": routes disagree (" << a << " vs " << b << ", deviation " << dev << ")";
    throw InvariantError(os.str());
  }
}

}  // namespace

void caustic_guard(double k, double t) {
  if (!(k >= 0.0) || !std::isfinite(k)) throw InputError("oscillator strength k must be >= 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw InputError("propagation time t must be > 0");
  if (k == 0.0) return;
  const double phase = std::sqrt(k) * t;
  const double m = std::round(phase / kPi);
  if (m >= 1.0 && std::abs(phase - m * kPi) <= 1e-9) throw CausticError(phase);
}

cplx ho_green_closed(double k, double t, double y) {
  caustic_guard(k, t);
  return std::exp(log_ho_prefactor(k, t) + kI * 0.5 * sk_over_tan(k, t) * y * y);
}

RoutePair free_integrand_routes(const TimeGrid& grid, double t, double y, const PhaseFunction& f) {
  require_same_grid(grid, f.grid());
  const PhaseFunction eta = indicator(grid, 0.0, t, Component::x);
  GaussKernelSpec spec{kinetic_K(grid, t), BlockOperator::zero(grid), PhaseFunction(grid),
                       {Pinning{eta, y}}};
  RoutePair r;
  r.lemma = t_transform_gauss(spec, f);

  const BlockOperator R = sqrt_R(grid, t);
  const PhaseFunction r_eta = R.apply(eta);
  const PhaseFunction r_f = R.apply(f);
  r.scaled = donsker_from_pairings(pair_bilinear(r_eta, r_eta), pair_bilinear(r_eta, r_f),
                                   pair_bilinear(r_f, r_f), y);
  return r;
}

cplx free_integrand_T(const TimeGrid& grid, double t, double y, const PhaseFunction& f) {
  const RoutePair r = free_integrand_routes(grid, t, y, f);
  require_route_agreement(r.lemma, r.scaled, "free integrand");
  return r.lemma;
}

GaussKernelSpec ho_spec(const TimeGrid& grid, double t, double k, double y) {
  caustic_guard(k, t);
  require_in_window(grid, t);
  BlockOperator L = k == 0.0 ? BlockOperator::zero(grid) : volterra_ho(grid, t, k);
  return GaussKernelSpec{kinetic_K(grid, t), std::move(L), PhaseFunction(grid),
                         {Pinning{indicator(grid, 0.0, t, Component::x), y}}};
}

cplx ho_T_closed(double k, double t, double y, const PhaseFunction& f) {
  caustic_guard(k, t);
  const TimeGrid& grid = f.grid();
  require_in_window(grid, t);
  const int n = grid.n();
  const int a = grid.cells_below(t);
  const double dt = grid.dt();

  const Mat A = volterra_A(grid, t).topLeftCorner(a, a).cast<cplx>();
  const Mat kA = k * A;
  const Mat Q = (kA - Mat::Identity(a, a)).partialPivLu().inverse();

  const Vec xa = f.x_part().head(a);
  const Vec pa = f.p_part().head(a);
  const Vec q_sum = Q * (xa + pa);  // N^{-1} on [0,t): x-row -i Q (x + p)
  const Vec p_row = Q * xa + kA * (Q * pa);

  cplx quad = dt * (-kI) * ((xa.transpose() * q_sum)(0, 0) + (pa.transpose() * p_row)(0, 0));
  for (int i = a; i < n; ++i) {
    quad += dt * (f.x_part()[i] * f.x_part()[i] + f.p_part()[i] * f.p_part()[i]);
  }
  const cplx eta_n_inv_f = dt * (-kI) * q_sum.sum();
  const cplx u = kI * y + eta_n_inv_f;
  const cplx pinning = -0.5 * kI * sk_over_tan(k, t) * u * u;
  return std::exp(log_ho_prefactor(k, t) - 0.5 * quad + pinning);
}

std::vector<PropagatorValue> ho_propagator_table(double k, double t, const std::vector<double>& ys,
                                                 int n) {
  caustic_guard(k, t);
  const TimeGrid grid(t, n);
  const PreparedGaussKernel kernel(ho_spec(grid, t, k, 0.0));
  const PhaseFunction zero(grid);
  std::vector<PropagatorValue> out;
  out.reserve(ys.size());
  for (const double y : ys) {
    PropagatorValue v;
    v.grid_value = kernel.evaluate(zero, {y});
    v.closed_form = ho_green_closed(k, t, y);
    v.abs_deviation = std::abs(v.grid_value - v.closed_form);
    v.rel_deviation = v.abs_deviation / std::abs(v.closed_form);
    out.push_back(v);
  }
  return out;
}

PropagatorValue ho_propagator(double k, double t, double y, int n) {
  return ho_propagator_table(k, t, {y}, n).front();
}

cplx scaled_quadratic_T_only(const TimeGrid& grid, double t, const BlockOperator& L,
                             const std::vector<Pinning>& pinnings, const PhaseFunction& f) {
  require_same_grid(grid, L.grid());
  require_same_grid(grid, f.grid());
  const int m = 2 * grid.n();
  const int J = static_cast<int>(pinnings.size());
  const Mat R = sqrt_R(grid, t).dense();
  const Mat Lp = R * L.dense() * R;
  const Mat id = Mat::Identity(m, m);

  Mat E(m, J);
  for (int k = 0; k < J; ++k) {
    require_same_grid(grid, pinnings[k].eta.grid());
    E.col(k) = R * pinnings[k].eta.coords();
  }
  auto bordered = [&](double tau) {
    Mat b = Mat::Zero(m + J, m + J);
    b.topLeftCorner(m, m) = id + tau * Lp;
    b.topRightCorner(m, J) = E;
    b.bottomLeftCorner(J, m) = E.transpose();
    return b;
  };

  // D(tau) = (-1)^J det(bordered) = det(Id + tau L') det(M'(tau)); follow its
  // logarithm continuously from the free value at tau = 0.
  cplx log_d = J > 0 ? linalg::log_det_continued(Mat(E.transpose() * E)) : cplx(0.0);
  cplx prev = linalg::log_det_mod_2pi(bordered(0.0));
  double tau = 0.0;
  double h = 1.0 / 16.0;
  while (tau < 1.0) {
    const double step = std::min(h, 1.0 - tau);
    const cplx next = linalg::log_det_mod_2pi(bordered(tau + step));
    const cplx delta(next.real() - prev.real(), std::remainder(next.imag() - prev.imag(), 2 * kPi));
    if (std::abs(delta.imag()) > 0.3 || std::abs(delta.real()) > 0.5) {
      h = step / 2.0;
      if (h < 1e-7) throw MathError("scaled route: coupling homotopy passes a zero of the determinant");
      continue;
    }
    log_d += delta;
    prev = next;
    tau += step;
    h = std::min(1.0 / 8.0, step * 1.5);
  }

  const Mat n_prime = id + Lp;
  linalg::require_invertible(n_prime, "Id + R L R");
  const Eigen::PartialPivLU<Mat> lu(n_prime);
  const Vec fp = R * f.coords();
  const Vec n_inv_f = lu.solve(fp);
  cplx log_t = -0.5 * J * kLog2Pi - 0.5 * log_d - 0.5 * (fp.transpose() * n_inv_f)(0, 0);
  if (J > 0) {
    const Mat n_inv_e = lu.solve(E);
    const Mat mp = E.transpose() * n_inv_e;
    Vec u = n_inv_e.transpose() * fp;
    for (int k = 0; k < J; ++k) u[k] += kI * pinnings[k].y;
    log_t += 0.5 * (u.transpose() * mp.partialPivLu().solve(u))(0, 0);
  }
  return std::exp(log_t);
}

cplx scaled_quadratic_T(const TimeGrid& grid, double t, const BlockOperator& L,
                        const std::vector<Pinning>& pinnings, const PhaseFunction& f) {
  const GaussKernelSpec spec{kinetic_K(grid, t), L, PhaseFunction(grid), pinnings};
  const cplx lemma = t_transform_gauss(spec, f);
  const cplx scaled = scaled_quadratic_T_only(grid, t, L, pinnings, f);
  require_route_agreement(lemma, scaled, "scaled quadratic kernel");
  return scaled;
}

}  // namespace wnpi

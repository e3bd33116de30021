#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "wnpi/linalg.hpp"
#include "wnpi/opalg.hpp"

using namespace wnpi;

TEST_CASE("grid nodes sit at cell midpoints") {
  const TimeGrid g(1.5, 3);
  CHECK(g.dt() == doctest::Approx(0.5));
  CHECK(g.node(0) == doctest::Approx(0.25));
  CHECK(g.node(2) == doctest::Approx(1.25));
  CHECK(g.cells_below(1.0) == 2);
  CHECK_THROWS_AS(TimeGrid(1.0, 0), InputError);
  CHECK_THROWS_AS(require_in_window(g, 2.0), InputError);
}

TEST_CASE("indicator and bilinear pairing") {
  const TimeGrid g(1.0, 4);
  const PhaseFunction x = indicator(g, 0.0, 0.5, Component::x);
  CHECK(x.x_part()[0] == cplx(1.0));
  CHECK(x.x_part()[2] == cplx(0.0));
  CHECK(x.p_part().cwiseAbs().sum() == 0.0);
  CHECK(std::abs(pair_bilinear(x, x) - 0.5) < 1e-15);

  // no conjugation
  const PhaseFunction f = cplx(0.0, 1.0) * x;
  CHECK(std::abs(pair_bilinear(f, f) + 0.5) < 1e-15);

  const Vec c = f.coords();
  const PhaseFunction back = PhaseFunction::from_coords(g, c);
  CHECK((back.x_part() - f.x_part()).norm() < 1e-15);
}

TEST_CASE("volterra operator: symmetric, exact trace, midpoint entries") {
  const TimeGrid g(1.5, 6);
  const RMat a = volterra_A(g, 1.0);
  CHECK((a - a.transpose()).norm() == 0.0);
  // trace is the midpoint rule for a linear integrand: exactly t^2 / 2
  CHECK(a.trace() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(a(0, 1) == doctest::Approx(0.25 * (1.0 - 0.375)));
  CHECK(a(0, 5) == 0.0);
}

TEST_CASE("kinetic symbol and free N inverse") {
  const TimeGrid g(1.5, 3);
  const BlockOperator K = kinetic_K(g, 1.0);
  CHECK(K.is_symbol());
  const auto s = K.symbol(0);
  CHECK(s(0, 0) == cplx(-1.0));
  CHECK(s(0, 1) == cplx(0.0, -1.0));
  CHECK(s(1, 1) == cplx(-1.0, 1.0));
  CHECK(K.symbol(2).isZero());
  const BlockOperator id = BlockOperator::identity(g);
  CHECK(max_abs_diff(invert(id + K), free_N_inv(g, 1.0)) < 1e-15);
}

TEST_CASE("square root R") {
  for (int n : {1, 16, 256}) {
    const TimeGrid g(1.5, n);
    const BlockOperator R = sqrt_R(g, 1.0);
    CHECK(max_abs_diff(R * R, free_N_inv(g, 1.0)) <= 1e-12);
    CHECK(max_abs_diff(R, R.transpose()) <= 1e-12);
  }
  // eigenvalues of the active symbol are sqrt(i lambda), lambda = (1 +- sqrt 5) / 2
  const TimeGrid g(1.0, 1);
  Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(sqrt_R(g, 1.0).symbol(0));
  auto ev = es.eigenvalues();
  if (std::abs(ev[0]) < std::abs(ev[1])) std::swap(ev[0], ev[1]);
  CHECK(std::abs(ev[0] - 0.899453719973934 * cplx(1.0, 1.0)) < 1e-14);
  CHECK(std::abs(ev[1] - 0.555892970251421 * cplx(1.0, -1.0)) < 1e-14);
}

TEST_CASE("relative determinant") {
  const TimeGrid g(1.5, 4);
  const BlockOperator K = kinetic_K(g, 1.0);
  CHECK(std::abs(det_rel(K, BlockOperator::zero(g)) - 1.0) < 1e-15);
  // harmonic oscillator: det(Id + N^-1 L) -> cos(sqrt(k) t)
  const TimeGrid fine(1.0, 256);
  const cplx d = det_rel(kinetic_K(fine, 1.0), volterra_ho(fine, 1.0, 1.0));
  CHECK(std::abs(d - 0.5403023058681397) < 1e-5);
  const TimeGrid fine2(2.0, 256);
  const cplx d2 = det_rel(kinetic_K(fine2, 2.0), volterra_ho(fine2, 2.0, 2.0));
  CHECK(std::abs(d2 + 0.9513631281258474) < 1e-4);
}

TEST_CASE("singular operators are rejected") {
  const TimeGrid g(1.0, 2);
  CHECK_THROWS_AS(invert(BlockOperator::zero(g)), SingularError);
}

TEST_CASE("continued log-determinant") {
  Mat a(2, 2);
  a << cplx(2.0, 0.0), 0.0, 0.0, cplx(0.0, 3.0);
  CHECK(std::abs(linalg::log_det_continued(a) - (std::log(2.0) + std::log(cplx(0.0, 3.0)))) < 1e-14);
  const Mat neg = -Mat::Identity(1, 1);
  CHECK_THROWS_AS(linalg::log_det_eigen(neg), MathError);
  CHECK(std::abs(linalg::det(a) - cplx(0.0, 6.0)) < 1e-14);
}

#include <doctest.h>

#include <cmath>

#include "wnpi/chaos.hpp"
#include "wnpi/oracle.hpp"
#include "wnpi/rng.hpp"

using namespace wnpi;

TEST_CASE("Philox4x32-10 known answers") {
  using C = Philox4x32::Counter;
  CHECK(Philox4x32::apply({0, 0, 0, 0}, {0, 0}) == C{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(Philox4x32::apply({~0u, ~0u, ~0u, ~0u}, {~0u, ~0u}) ==
        C{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(Philox4x32::apply({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        C{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("normal streams are addressable and reproducible") {
  const NormalStream a(7, 123), b(7, 123), c(8, 123);
  CHECK(a.pair(3) == b.pair(3));
  CHECK(a.pair(3) != c.pair(3));
  NormalSequence s1(1, 2), s2(1, 2);
  for (int i = 0; i < 5; ++i) CHECK(s1.next() == s2.next());
}

TEST_CASE("analytic Gaussian integrals") {
  // E[exp(w^2 / 4)] = sqrt(2)
  CHECK(std::abs(gauss_integral_analytic({Mat::Constant(1, 1, -0.5), Vec::Zero(1), {}}) - std::sqrt(2.0)) < 1e-15);
  // E[exp(b w)] = exp(b^2 / 2)
  const OracleProblem lin{Mat::Zero(1, 1), Vec::Constant(1, 0.7), {}};
  CHECK(std::abs(gauss_integral_analytic(lin) - std::exp(0.245)) < 1e-14);
  // E[delta(w)] = (2 pi)^{-1/2}
  const OracleProblem pin{Mat::Zero(1, 1), Vec::Zero(1), {OraclePin{RVec::Ones(1), 0.0}}};
  CHECK(std::abs(gauss_integral_analytic(pin) - 0.3989422804014327) < 1e-15);
  // E[exp(i w^2 / 2)] = (1 - i)^{-1/2}: principal branch
  const OracleProblem osc{Mat::Constant(1, 1, cplx(0.0, -1.0)), Vec::Zero(1), {}};
  CHECK(std::abs(gauss_integral_analytic(osc) - std::pow(cplx(1.0, -1.0), -0.5)) < 1e-15);
  // not integrable
  CHECK_THROWS_AS(gauss_integral_analytic({Mat::Constant(1, 1, -1.0), Vec::Zero(1), {}}), MathError);
}

TEST_CASE("Monte Carlo is deterministic and unbiased") {
  const OracleProblem p{Mat::Constant(2, 2, 0.2) + Mat::Identity(2, 2), Vec::Constant(2, cplx(0.1, 0.3)), {}};
  McOptions opt{3, 50'000, 1};
  const McEstimate a = gauss_integral_mc(p, 0.1, opt);
  const McEstimate b = gauss_integral_mc(p, 0.1, opt);
  CHECK(a.value == b.value);
  CHECK(a.agrees_with(gauss_integral_analytic(mollify(p, 0.1)), 4.0));

  opt.threads = 2;
  CHECK(gauss_integral_mc(p, 0.1, opt).value == a.value);

  const McEstimate one = mc_expectation(2, [](const RVec&) { return cplx(1.0); }, opt);
  CHECK(one.value == cplx(1.0));
  CHECK(one.stderr_re == 0.0);
}

TEST_CASE("Gauss-Hermite quadrature agrees with the analytic integral") {
  Mat q(2, 2);
  q << cplx(0.6, 0.3), cplx(0.1, -0.2), cplx(0.1, -0.2), cplx(0.4, 0.0);
  Vec b(2);
  b << cplx(0.2, 0.5), -0.3;
  const OracleProblem p{q, b, {}};
  CHECK(std::abs(gauss_integral_quadrature(p, 40) - gauss_integral_analytic(p)) < 1e-12);
  CHECK(std::abs(gauss_integral_quadrature({Mat::Zero(1, 1), Vec::Zero(1), {}}, 5) - 1.0) < 1e-14);
  const OracleProblem pinned{Mat::Zero(1, 1), Vec::Zero(1), {OraclePin{RVec::Ones(1), 0.0}}};
  CHECK_THROWS_AS(gauss_integral_quadrature(pinned, 10), InputError);
}

TEST_CASE("integrability of the mollified problem") {
  // integrable (1 + Q > 0) but with infinite variance (1 + 2Q < 0)
  const OracleProblem heavy{Mat::Constant(1, 1, -0.6), Vec::Zero(1), {}};
  CHECK_NOTHROW(gauss_integral_analytic(heavy));
  CHECK_FALSE(mc_square_integrable(heavy, 0.1));
  const OracleProblem osc{Mat::Constant(1, 1, cplx(0.0, -1.0)), Vec::Zero(1), {}};
  CHECK(mc_square_integrable(osc, 0.1));
}

TEST_CASE("Wick powers") {
  Vec w(2);
  w << 0.5, -1.5;
  CHECK((wick_power(w, 1) - w).norm() == 0.0);
  const Vec w2 = wick_power(w, 2);
  CHECK(std::abs(w2[0] - (0.25 - 1.0)) < 1e-15);
  CHECK(std::abs(w2[1] - (-0.75)) < 1e-15);
  CHECK(std::abs(w2[3] - (2.25 - 1.0)) < 1e-15);
  // :w^3: = w^3 - 3 w in one dimension
  const Vec x = Vec::Constant(1, 1.3);
  CHECK(std::abs(wick_power(x, 3)[0] - (1.3 * 1.3 * 1.3 - 3.0 * 1.3)) < 1e-14);
}

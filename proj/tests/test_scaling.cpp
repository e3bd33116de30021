#include <doctest.h>

#include "wnpi/gausskernel.hpp"
#include "wnpi/oracle.hpp"
#include "wnpi/scaling.hpp"

using namespace wnpi;

namespace {

DenseChaos sample_chaos(int m) {
  DenseChaos phi(m, 2);
  phi.kernel(0)[0] = cplx(0.5, -0.1);
  for (int i = 0; i < m; ++i) phi.kernel(1)[i] = cplx(0.1 * (i + 1), 0.05);
  for (Eigen::Index i = 0; i < phi.kernel(2).size(); ++i) phi.kernel(2)[i] = cplx(0.02 * i, -0.01 * i);
  phi.symmetrize();
  return phi;
}

}  // namespace

TEST_CASE("trace kernel entries") {
  Mat b(2, 2);
  b << 1.0, cplx(0.0, 2.0), 3.0, 4.0;
  const Mat t = trace_kernel(b);
  CHECK(t(0, 1) == cplx(0.0, 2.0));
  CHECK(t(1, 0) == cplx(3.0));
}

TEST_CASE("sigma of the identity is the identity") {
  const DenseChaos phi = sample_chaos(3);
  const DenseChaos out = sigma_dense(Mat::Identity(3, 3), phi);
  for (int n = 0; n <= 2; ++n) CHECK(out.kernel(n) == phi.kernel(n));
}

TEST_CASE("sigma of zI reduces to traces") {
  const DenseChaos phi = sample_chaos(2);
  const cplx z(0.7, 0.2);
  const DenseChaos out = sigma_dense(z * Mat::Identity(2, 2), phi);
  const cplx tr = phi.kernel(2)[0] + phi.kernel(2)[3];
  CHECK(std::abs(out.kernel(0)[0] - (phi.kernel(0)[0] + (z * z - 1.0) * tr)) < 1e-14);
  CHECK((out.kernel(1) - z * phi.kernel(1)).norm() < 1e-14);
  CHECK((out.kernel(2) - z * z * phi.kernel(2)).norm() < 1e-14);
}

TEST_CASE("sigma acts pointwise on Wick-ordered chaos") {
  const DenseChaos phi = sample_chaos(3);
  Mat b(3, 3);
  b << 0.5, 0.1, 0.0, -0.2, 0.8, 0.3, 0.1, 0.0, 0.4;
  Vec w(3);
  w << 0.3, -1.2, 0.7;
  CHECK(std::abs(wick_eval(sigma_dense(b, phi), w) - wick_eval(phi, b * w)) < 1e-13);
  DenseChaos asym(2, 2);
  asym.kernel(2)[1] = 1.0;
  CHECK_THROWS_AS(sigma_dense(Mat::Identity(2, 2), asym), InputError);
}

TEST_CASE("coherent chaos: product and S-transform") {
  Vec a(2), b(2), xi(2);
  a << 0.3, cplx(0.0, 0.2);
  b << -0.1, 0.4;
  xi << 0.5, -0.25;
  const CoherentChaos p(2, {{2.0, a}});
  const CoherentChaos q(2, {{cplx(0.0, 1.0), b}});
  const cplx expected = 2.0 * cplx(0.0, 1.0) * std::exp((a.transpose() * b)(0, 0) +
                                                         ((a + b).transpose() * xi)(0, 0));
  CHECK(std::abs(s_transform(p * q, xi) - expected) < 1e-14);
}

TEST_CASE("S-transform of a Gauss kernel and its T-transform") {
  const TimeGrid g(1.0, 2);
  GaussKernelSpec s = GaussKernelSpec::vacuum(g);
  s.pinnings.push_back({indicator(g, 0.0, 1.0, Component::x), 0.3});
  const PreparedGaussKernel k(s);
  const PhaseFunction xi(g, Vec::Constant(2, 0.4), Vec::Constant(2, cplx(0.1, 0.2)));
  const cplx expected = k.evaluate(cplx(0.0, -1.0) * xi) * std::exp(-0.5 * pair_bilinear(xi, xi));
  CHECK(std::abs(s_transform(k, xi) - expected) < 1e-15);

  const SFunctional S = [&](const Vec& c) { return s_transform(k, PhaseFunction::from_coords(g, c)); };
  CHECK(std::abs(t_from_s(S, xi.coords()) - k.evaluate(xi)) < 1e-14);
}

TEST_CASE("Gauss kernel S-transform matches the oracle") {
  Mat b(2, 2);
  b << 0.9, 0.2, -0.1, 0.6;
  Vec xi(2);
  xi << cplx(0.3, 0.1), -0.5;
  OracleProblem p{Mat::Zero(2, 2), b.transpose() * xi, {}};
  p.log_scale = -0.5 * (xi.transpose() * xi)(0, 0);
  CHECK(std::abs(gauss_kernel_S(b, xi) - gauss_integral_analytic(p)) < 1e-14);
}

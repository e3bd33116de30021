#include <doctest.h>

#include <cmath>

#include "wnpi/gausskernel.hpp"
#include "wnpi/oracle.hpp"
#include "wnpi/pathint.hpp"
#include "wnpi/suites.hpp"

using namespace wnpi;

namespace {

GaussKernelSpec kinetic_pinned(const TimeGrid& g, double t, double y) {
  return GaussKernelSpec{kinetic_K(g, t), BlockOperator::zero(g), PhaseFunction(g),
                         {Pinning{indicator(g, 0.0, t, Component::x), y}}};
}

}  // namespace

TEST_CASE("vacuum and Donsker delta") {
  const TimeGrid g(1.0, 4);
  CHECK(generalized_expectation(GaussKernelSpec::vacuum(g)) == cplx(1.0));

  GaussKernelSpec d = GaussKernelSpec::vacuum(g);
  d.pinnings.push_back({indicator(g, 0.0, 1.0, Component::x), 0.0});
  CHECK(std::abs(generalized_expectation(d) - 0.3989422804014327) < 1e-15);

  const PhaseFunction f(g, Vec::Constant(4, 0.3), Vec::Constant(4, -0.2));
  d.pinnings[0].y = 0.6;
  CHECK(std::abs(t_transform_gauss(d, f) - t_transform_donsker(d.pinnings[0].eta, 0.6, f)) < 1e-15);
}

TEST_CASE("kinetic kernel gives the free propagator") {
  const TimeGrid g(1.5, 12);
  CHECK(std::abs(generalized_expectation(kinetic_pinned(g, 1.0, 0.0)) -
                 0.28209479177387814 * cplx(1.0, -1.0)) < 1e-14);
  CHECK(std::abs(generalized_expectation(kinetic_pinned(g, 1.0, 1.0)) -
                 cplx(0.38280491754448324, -0.1123180225772192)) < 1e-14);
  CHECK(std::abs(generalized_expectation(kinetic_pinned(g, 0.5, 1.0)) -
                 cplx(0.55124778758008958, 0.12014891956171351)) < 1e-14);
}

TEST_CASE("normalized exponential") {
  const TimeGrid g(1.5, 12);
  const cplx v = normalized_exp_T(kinetic_K(g, 1.0), indicator(g, 0.0, 1.0, Component::x));
  CHECK(std::abs(v - std::exp(cplx(0.0, -0.5))) < 1e-15);
}

TEST_CASE("Lemma hypothesis is enforced") {
  const TimeGrid g(1.0, 1);
  GaussKernelSpec s{BlockOperator::zero(g), cplx(-2.0) * BlockOperator::identity(g), PhaseFunction(g),
                    {Pinning{indicator(g, 0.0, 1.0, Component::x), 0.1}}};
  CHECK_THROWS_WITH_AS(PreparedGaussKernel{s}, doctest::Contains("Lemma hypothesis"), MathError);

  GaussKernelSpec singular = GaussKernelSpec::vacuum(g);
  singular.L = cplx(-1.0) * BlockOperator::identity(g);
  CHECK_THROWS_AS(PreparedGaussKernel{singular}, SingularError);

  GaussKernelSpec bad_eta = GaussKernelSpec::vacuum(g);
  bad_eta.pinnings.push_back({PhaseFunction(g), 0.0});
  CHECK_THROWS_AS(PreparedGaussKernel{bad_eta}, InputError);
}

TEST_CASE("Lemma formula agrees with the oracle on the corpus") {
  for (const CorpusCase& c : lemma_corpus()) {
    CAPTURE(c.name);
    const MagicReport r = verify_magicformula(c.spec, c.f);
    CHECK(r.abs_deviation <= 1e-9);
    CHECK(r.resolved_sign == 1);
  }
}

TEST_CASE("Gaussian mass det(Id + 2K)^(-1/2)") {
  const GrotexReport one = grotex_check(RMat::Constant(1, 1, -0.25), Vec::Zero(1));
  CHECK(std::abs(one.rhs - std::sqrt(2.0)) < 1e-14);
  CHECK(one.mass_deviation() < 1e-14);

  RMat k(2, 2);
  k << -0.25, 0.0, 0.0, -0.1;
  Vec f(2);
  f << 0.3, -0.7;
  const GrotexReport two = grotex_check(k, f);
  CHECK(std::abs(two.rhs - 1.5811388300841897) < 1e-14);
  CHECK(two.mass_deviation() < 1e-14);
  CHECK(two.transform_deviation() < 1e-14);

  CHECK_THROWS_AS(grotex_check(RMat::Constant(1, 1, -0.5), Vec::Zero(1)), MathError);
}

TEST_CASE("U-functional report") {
  const TimeGrid g(1.0, 2);
  const PhaseFunction eta = indicator(g, 0.0, 1.0, Component::x);
  const auto F = [&](const PhaseFunction& f) { return t_transform_donsker(eta, 0.2, f); };
  const PhaseFunction f(g, Vec::Constant(2, 0.5), Vec::Constant(2, 0.5));
  const PhaseFunction h(g, Vec::Constant(2, 0.1), Vec::Constant(2, -0.2));
  const UReport r = check_u_functional(F, f, h, disc_samples(4.0, 4, 8));
  CHECK(r.finite);
  CHECK(r.violations == 0);
  CHECK(r.C == doctest::Approx(std::abs(F(PhaseFunction(g)))));
  CHECK(r.max_cr_residual <= 1e-6);

  // a non-analytic functional is caught by the Cauchy-Riemann residual
  const auto bad = [&](const PhaseFunction& f) { return std::conj(F(f)); };
  CHECK(check_u_functional(bad, f, h, disc_samples(1.0, 2, 4)).max_cr_residual > 1e-3);
}

#include <doctest.h>

#include <array>
#include <cmath>

#include "wnpi/gausskernel.hpp"
#include "wnpi/pathint.hpp"

using namespace wnpi;

namespace {

struct GreenCase {
  double k, t, y;
  cplx value;
};

// sqrt(sqrt(k) / (2 pi i sin(sqrt(k) t))) exp(i sqrt(k) y^2 / (2 tan(sqrt(k) t))), 30-digit reference
const std::array<GreenCase, 18> kGreen = {{
    {0.5, 0.3, 0.0, 0.51697018251155421 * cplx(1, -1)},
    {0.5, 0.3, 1.0, {0.47910686455419039, 0.55224356179960306}},
    {0.5, 1.0, 0.0, 0.29430809890018428 * cplx(1, -1)},
    {0.5, 1.0, 1.0, {0.38779952011455729, -0.15114908651857734}},
    {0.5, 2.0, 0.0, 0.23867698566659838 * cplx(1, -1)},
    {0.5, 2.0, 1.0, {0.25162066147748885, -0.22498988797592253}},
    {1.0, 0.3, 0.0, 0.51892127571620528 * cplx(1, -1)},
    {1.0, 0.3, 1.0, {0.49474472976391718, 0.54202050990040631}},
    {1.0, 1.0, 0.0, 0.30752150772816185 * cplx(1, -1)},
    {1.0, 1.0, 1.0, {0.3888502896348387, -0.19476757348620914}},
    {1.0, 2.0, 0.0, 0.29582991377524847 * cplx(1, -1)},
    {1.0, 2.0, 1.0, {0.22101327203595731, -0.35522360472314029}},
    {2.0, 0.3, 0.0, 0.52286358605631306 * cplx(1, -1)},
    {2.0, 0.3, 1.0, {0.52565372664337165, 0.52005847643632394}},
    {2.0, 1.0, 0.0, 0.33754023015603224 * cplx(1, -1)},
    {2.0, 1.0, 1.0, {0.3730421005201062, -0.29783620529935814}},
    {2.0, 2.0, 0.0, 0.60440303224013624 * cplx(1, -1)},
    {2.0, 2.0, 1.0, {-0.84206014958800113, -0.14676769139689944}},
}};

}  // namespace

TEST_CASE("closed-form Green's function") {
  for (const auto& c : kGreen) {
    CAPTURE(c.k);
    CAPTURE(c.t);
    CAPTURE(c.y);
    CHECK(std::abs(ho_green_closed(c.k, c.t, c.y) - c.value) <= 1e-14 * std::abs(c.value));
  }
}

TEST_CASE("free limit of the closed form") {
  CHECK(std::abs(ho_green_closed(0.0, 0.5, 0.0) - 0.39894228040143268 * cplx(1, -1)) < 1e-15);
  CHECK(std::abs(ho_green_closed(0.0, 2.0, 1.0) - cplx(0.24262001535593088, -0.14392011567058836)) < 1e-15);
  CHECK(std::abs(ho_green_closed(1e-12, 1.0, 1.0) - cplx(0.38280491754448324, -0.1123180225772192)) < 1e-12);
}

TEST_CASE("caustics") {
  CHECK_THROWS_AS(ho_green_closed(1.0, M_PI, 0.0), CausticError);
  CHECK_THROWS_AS(ho_propagator(4.0, M_PI / 2.0, 0.0, 16), CausticError);
  CHECK_NOTHROW(ho_green_closed(1.0, M_PI / 2.0, 0.0));
  // Maslov phase past the first caustic: modulus from |sin|, phase -3 pi / 4
  const cplx v = ho_green_closed(1.0, 4.0, 0.0);
  CHECK(std::abs(v) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI * std::abs(std::sin(4.0)))));
  CHECK(std::arg(v) == doctest::Approx(-3.0 * M_PI / 4.0));
}

TEST_CASE("grid propagator converges at second order") {
  const double d64 = ho_propagator(1.0, 1.0, 1.0, 64).rel_deviation;
  const double d128 = ho_propagator(1.0, 1.0, 1.0, 128).rel_deviation;
  CHECK(d128 < 1e-3);
  CHECK(d64 / d128 == doctest::Approx(4.0).epsilon(0.05));
  // beyond the first caustic the grid route follows the Maslov-corrected closed form
  CHECK(ho_propagator(1.0, 4.0, 0.5, 128).rel_deviation < 1e-3);
}

TEST_CASE("free integrand: both routes and the exact value") {
  const TimeGrid g(1.5, 12);
  const PhaseFunction f(g, Vec::LinSpaced(12, -0.3, 0.4), Vec::Constant(12, 0.2));
  const RoutePair r = free_integrand_routes(g, 1.0, 0.5, f);
  CHECK(r.deviation() < 1e-12);
  const TimeGrid one(1.0, 1);
  CHECK(std::abs(free_integrand_T(one, 1.0, 1.0, PhaseFunction(one)) -
                 cplx(0.38280491754448324, -0.1123180225772192)) < 1e-15);
}

TEST_CASE("scaled route equals the Lemma route") {
  const TimeGrid g(1.5, 12);
  const BlockOperator L = volterra_ho(g, 1.0, 2.0);
  const std::vector<Pinning> pins{{indicator(g, 0.0, 1.0, Component::x), -0.4}};
  const PhaseFunction f(g, Vec::LinSpaced(12, 0.1, -0.2), Vec::Constant(12, 0.05));
  const cplx lemma = t_transform_gauss(GaussKernelSpec{kinetic_K(g, 1.0), L, PhaseFunction(g), pins}, f);
  CHECK(std::abs(scaled_quadratic_T_only(g, 1.0, L, pins, f) - lemma) < 1e-10);
  CHECK(std::abs(scaled_quadratic_T(g, 1.0, L, pins, f) - lemma) < 1e-10);
}

TEST_CASE("closed-form T-transform of the oscillator") {
  const TimeGrid g(1.5, 192);
  const PhaseFunction f(g, Vec::Constant(192, 0.2), Vec::Constant(192, cplx(0.1, -0.1)));
  const cplx lemma = t_transform_gauss(ho_spec(g, 1.0, 1.0, 0.7), f);
  CHECK(std::abs(ho_T_closed(1.0, 1.0, 0.7, f) - lemma) < 1e-3 * std::abs(lemma));
}

#include <doctest.h>

#include <cmath>
#include <limits>

#include "wnpi/io.hpp"
#include "wnpi/report.hpp"

using namespace wnpi;
using nlohmann::json;

TEST_CASE("spec parsing") {
  const json j = json::parse(R"({
    "grid": {"t_ambient": 1.5, "n": 3},
    "K": {"kind": "kinetic", "t": 1.0},
    "L": {"kind": "scaled", "c": [0, 2], "op": {"kind": "identity"}},
    "g": {"kind": "values", "x_part": [1, [0, 1], 0], "p_part": [0, 0, 0]},
    "pinnings": [{"eta": {"kind": "indicator", "component": "x", "a": 0, "b": 1}, "y": 0.5}]
  })");
  const GaussKernelSpec s = io::spec_from_json(j);
  CHECK(s.grid().n() == 3);
  CHECK(s.K.is_symbol());
  CHECK(s.g.x_part()[1] == cplx(0.0, 1.0));
  REQUIRE(s.pinnings.size() == 1);
  CHECK(s.pinnings[0].y == 0.5);
  CHECK(s.L.symbol(0)(0, 0) == cplx(0.0, 2.0));
}

TEST_CASE("schema errors are input errors") {
  CHECK_THROWS_AS(io::spec_from_json(json::parse(R"({"grid": {"t_ambient": 1, "n": 2}})")), InputError);
  CHECK_THROWS_AS(io::spec_from_json(json::parse(
                      R"({"grid": {"t_ambient": 1, "n": 2}, "K": {"kind": "nope"}, "L": {"kind": "zero"}})")),
                  InputError);
  CHECK_THROWS_AS(io::spec_from_json(json::parse(
                      R"({"grid": {"t_ambient": 1, "n": 2.5}, "K": {"kind": "zero"}, "L": {"kind": "zero"}})")),
                  InputError);
  CHECK_THROWS_AS(io::read_json_file("/nonexistent/spec.json"), InputError);
}

TEST_CASE("chaos JSON round trip") {
  DenseChaos phi(2, 1);
  phi.kernel(0)[0] = cplx(1.0, 2.0);
  phi.kernel(1)[1] = -0.5;
  const DenseChaos back = io::dense_chaos_from_json(io::to_json(phi));
  CHECK(back.kernel(0) == phi.kernel(0));
  CHECK(back.kernel(1) == phi.kernel(1));
}

TEST_CASE("shortest round-trip formatting") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1e-300) == "1e-300");
  const double x = 0.28209479177387814;
  CHECK(std::stod(io::format_double(x)) == x);
}

TEST_CASE("run report") {
  RunReport r("opalg", 7);
  r.add_measured("a", 1e-13, 1e-12);
  r.add_measured("b", std::numeric_limits<double>::quiet_NaN(), 1.0);
  r.add_boolean("c", true, "note");
  CHECK(r.count(CheckStatus::pass) == 2);
  CHECK(r.count(CheckStatus::fail) == 1);
  CHECK_FALSE(r.all_passed());
  CHECK_THROWS_AS(r.add_boolean("a", true), InvariantError);

  const json j = r.to_json();
  CHECK(j["checks"][1]["deviation"].is_null());
  CHECK(j["tool_version"] == kToolVersion);
  const RunReport back = RunReport::from_json(j);
  CHECK(back.to_json().dump() == j.dump());
  CHECK_THROWS_AS(RunReport::from_json(json::parse(R"({"suite": "x"})")), InputError);
}

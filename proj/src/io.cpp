#include "wnpi/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace wnpi::io {

namespace {

[[noreturn]] void schema_error(const std::string& what) { throw InputError("schema: " + what); }

const json& member(const json& j, const char* key) {
  if (!j.is_object()) schema_error(std::string("expected an object holding \"") + key + "\"");
  const auto it = j.find(key);
  if (it == j.end()) schema_error(std::string("missing field \"") + key + "\"");
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) schema_error(std::string(what) + " must be a number");
  return j.get<double>();
}

std::string string_field(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_string()) schema_error(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

Vec complex_array(const json& j, const char* what) {
  if (!j.is_array()) schema_error(std::string(what) + " must be an array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[Eigen::Index(i)] = complex_from_json(j[i]);
  return v;
}

json complex_array_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v[i]));
  return out;
}

Mat complex_rows(const json& j, int n, const char* what) {
  if (!j.is_array() || int(j.size()) != n) schema_error(std::string(what) + " must have n rows");
  Mat m(n, n);
  for (int r = 0; r < n; ++r) {
    const Vec row = complex_array(j[r], what);
    if (row.size() != n) schema_error(std::string(what) + " rows must have n entries");
    m.row(r) = row.transpose();
  }
  return m;
}

}  // namespace

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    schema_error("complex numbers are [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const TimeGrid& grid) { return {{"t_ambient", grid.t_ambient()}, {"n", grid.n()}}; }

TimeGrid grid_from_json(const json& j) {
  const json& n = member(j, "n");
  if (!n.is_number_integer()) schema_error("grid.n must be an integer");
  return TimeGrid(number(member(j, "t_ambient"), "grid.t_ambient"), n.get<int>());
}

json to_json(const PhaseFunction& f) {
  return {{"grid", to_json(f.grid())},
          {"x_part", complex_array_json(f.x_part())},
          {"p_part", complex_array_json(f.p_part())}};
}

PhaseFunction function_from_json(const json& j) {
  const TimeGrid grid = grid_from_json(member(j, "grid"));
  return PhaseFunction(grid, complex_array(member(j, "x_part"), "x_part"),
                       complex_array(member(j, "p_part"), "p_part"));
}

PhaseFunction funcspec_from_json(const json& j, const TimeGrid& grid) {
  const std::string kind = string_field(j, "kind");
  if (kind == "zero") return PhaseFunction(grid);
  if (kind == "indicator") {
    const std::string comp = string_field(j, "component");
    if (comp != "x" && comp != "p") schema_error("indicator.component must be \"x\" or \"p\"");
    PhaseFunction f = indicator(grid, number(member(j, "a"), "indicator.a"),
                                number(member(j, "b"), "indicator.b"),
                                comp == "x" ? Component::x : Component::p);
    if (j.contains("scale")) f *= complex_from_json(j["scale"]);
    return f;
  }
  if (kind == "values") {
    return PhaseFunction(grid, complex_array(member(j, "x_part"), "x_part"),
                         complex_array(member(j, "p_part"), "p_part"));
  }
  if (kind == "sum") {
    const json& terms = member(j, "terms");
    if (!terms.is_array()) schema_error("sum.terms must be an array");
    PhaseFunction acc(grid);
    for (const auto& t : terms) acc += funcspec_from_json(t, grid);
    return acc;
  }
  schema_error("unknown function kind \"" + kind + "\"");
}

PhaseFunction test_function_from_json(const json& j, const TimeGrid& grid) {
  if (j.is_object() && j.contains("kind")) return funcspec_from_json(j, grid);
  PhaseFunction f = function_from_json(j);
  require_same_grid(grid, f.grid());
  return f;
}

BlockOperator opspec_from_json(const json& j, const TimeGrid& grid) {
  const std::string kind = string_field(j, "kind");
  if (kind == "zero") return BlockOperator::zero(grid);
  if (kind == "identity") return BlockOperator::identity(grid);
  if (kind == "kinetic") return kinetic_K(grid, number(member(j, "t"), "kinetic.t"));
  if (kind == "free_n_inv") return free_N_inv(grid, number(member(j, "t"), "free_n_inv.t"));
  if (kind == "sqrt_r") return sqrt_R(grid, number(member(j, "t"), "sqrt_r.t"));
  if (kind == "volterra_ho") {
    return volterra_ho(grid, number(member(j, "t"), "volterra_ho.t"),
                       number(member(j, "k"), "volterra_ho.k"));
  }
  if (kind == "dense") {
    const int n = grid.n();
    return BlockOperator::from_blocks(grid, complex_rows(member(j, "xx"), n, "dense.xx"),
                                      complex_rows(member(j, "xp"), n, "dense.xp"),
                                      complex_rows(member(j, "px"), n, "dense.px"),
                                      complex_rows(member(j, "pp"), n, "dense.pp"));
  }
  if (kind == "sum") {
    const json& terms = member(j, "terms");
    if (!terms.is_array()) schema_error("sum.terms must be an array");
    BlockOperator acc = BlockOperator::zero(grid);
    for (const auto& t : terms) acc = acc + opspec_from_json(t, grid);
    return acc;
  }
  if (kind == "scaled") {
    return complex_from_json(member(j, "c")) * opspec_from_json(member(j, "op"), grid);
  }
  schema_error("unknown operator kind \"" + kind + "\"");
}

GaussKernelSpec spec_from_json(const json& j) {
  try {
    const TimeGrid grid = grid_from_json(member(j, "grid"));
    GaussKernelSpec spec{opspec_from_json(member(j, "K"), grid),
                         opspec_from_json(member(j, "L"), grid),
                         j.contains("g") ? funcspec_from_json(j["g"], grid) : PhaseFunction(grid),
                         {}};
    if (j.contains("pinnings")) {
      const json& pins = j["pinnings"];
      if (!pins.is_array()) schema_error("pinnings must be an array");
      for (const auto& p : pins) {
        spec.pinnings.push_back(
            Pinning{funcspec_from_json(member(p, "eta"), grid), number(member(p, "y"), "pinning.y")});
      }
    }
    return spec;
  } catch (const json::exception& e) {
    schema_error(e.what());
  }
}

json to_json(const DenseChaos& phi) {
  json kernels = json::array();
  for (int n = 0; n <= phi.n_max(); ++n) kernels.push_back(complex_array_json(phi.kernel(n)));
  return {{"repr", "dense"}, {"dim", phi.dim()}, {"n_max", phi.n_max()}, {"kernels", kernels}};
}

DenseChaos dense_chaos_from_json(const json& j) {
  if (string_field(j, "repr") != "dense") schema_error("expected repr \"dense\"");
  DenseChaos phi(member(j, "dim").get<int>(), member(j, "n_max").get<int>());
  const json& kernels = member(j, "kernels");
  if (!kernels.is_array() || int(kernels.size()) != phi.n_max() + 1) {
    schema_error("kernels must hold n_max + 1 arrays");
  }
  for (int n = 0; n <= phi.n_max(); ++n) {
    Vec k = complex_array(kernels[n], "kernel");
    if (k.size() != phi.kernel(n).size()) schema_error("kernel of wrong size");
    phi.kernel(n) = std::move(k);
  }
  return phi;
}

json to_json(const CoherentChaos& phi, const TimeGrid& grid) {
  if (phi.dim() != 2 * grid.n()) throw InputError("coherent chaos: dimension does not match grid");
  json terms = json::array();
  for (const auto& t : phi.terms()) {
    const PhaseFunction xi = PhaseFunction::from_coords(grid, t.xi);
    terms.push_back({{"w", to_json(t.w)},
                     {"xi",
                      {{"kind", "values"},
                       {"x_part", complex_array_json(xi.x_part())},
                       {"p_part", complex_array_json(xi.p_part())}}}});
  }
  return {{"repr", "coherent"}, {"grid", to_json(grid)}, {"terms", terms}};
}

CoherentChaos coherent_chaos_from_json(const json& j) {
  if (string_field(j, "repr") != "coherent") schema_error("expected repr \"coherent\"");
  const TimeGrid grid = grid_from_json(member(j, "grid"));
  CoherentChaos phi(2 * grid.n());
  const json& terms = member(j, "terms");
  if (!terms.is_array()) schema_error("terms must be an array");
  for (const auto& t : terms) {
    phi.add(complex_from_json(member(t, "w")), funcspec_from_json(member(t, "xi"), grid).coords());
  }
  return phi;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

}  // namespace wnpi::io

// wnpi: command-line front end for the white-noise path-integral library.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 input error,
// 3 mathematical precondition violated.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wnpi/io.hpp"
#include "wnpi/pathint.hpp"
#include "wnpi/suites.hpp"

namespace {

using wnpi::cplx;
using nlohmann::json;

int cmd_ttransform(const std::string& spec_path, const std::string& f_path) {
  const wnpi::GaussKernelSpec spec = wnpi::io::spec_from_json(wnpi::io::read_json_file(spec_path));
  const wnpi::PhaseFunction f = [&] {
    try {
      return wnpi::io::test_function_from_json(wnpi::io::read_json_file(f_path), spec.grid());
    } catch (const json::exception& e) {
      throw wnpi::InputError(std::string("schema: ") + e.what());
    }
  }();
  const cplx v = wnpi::t_transform_gauss(spec, f);
  std::printf("[%.16e, %.16e]\n", v.real(), v.imag());
  return 0;
}

std::pair<int, int> parse_dims(const std::string& s) {
  const auto dots = s.find("..");
  try {
    if (dots == std::string::npos) {
      const int d = std::stoi(s);
      return {d, d};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw wnpi::InputError("--dims expects lo..hi, got \"" + s + "\"");
  }
}

int cmd_verify(const std::string& suite, wnpi::SuiteOptions opt, const std::string& dims, bool as_json) {
  std::tie(opt.dims_min, opt.dims_max) = parse_dims(dims);
  const wnpi::RunReport report = wnpi::run_suite(suite, opt);
  if (as_json) {
    std::cout << report.to_json().dump(2) << '\n';
  } else {
    for (const auto& c : report.checks()) {
      std::cout << wnpi::to_string(c.status) << "  " << c.id;
      if (std::isfinite(c.deviation)) {
        std::cout << "  deviation=" << wnpi::io::format_double(c.deviation)
                  << " tol=" << wnpi::io::format_double(c.tolerance);
      }
      if (!c.note.empty()) std::cout << "  (" << c.note << ')';
      if (c.runtime_ms) std::cout << "  " << wnpi::io::format_double(*c.runtime_ms) << " ms";
      std::cout << '\n';
    }
    std::cout << report.count(wnpi::CheckStatus::pass) << " passed, "
              << report.count(wnpi::CheckStatus::fail) << " failed, "
              << report.count(wnpi::CheckStatus::skipped) << " skipped\n";
  }
  return report.all_passed() ? 0 : 1;
}

struct PropagatorQuery {
  double k = 1.0, t = 1.0, y_min = -2.0, y_max = 2.0;
  int y_steps = 5, n = 256;
  std::string format = "csv";
  bool plot_data = false;
};

int cmd_propagator(const PropagatorQuery& q) {
  if (q.y_steps < 1) throw wnpi::InputError("--y-steps must be positive");
  if (q.y_steps == 1 && q.y_min != q.y_max) throw wnpi::InputError("--y-steps 1 needs y-min == y-max");
  std::vector<double> ys(q.y_steps);
  for (int i = 0; i < q.y_steps; ++i) {
    ys[i] = q.y_steps == 1 ? q.y_min : q.y_min + (q.y_max - q.y_min) * i / (q.y_steps - 1);
  }
  const auto rows = wnpi::ho_propagator_table(q.k, q.t, ys, q.n);
  using wnpi::io::format_double;
  if (q.format == "json") {
    json out = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const cplx v = rows[i].grid_value;
      json row = {{"y", ys[i]},           {"re", v.real()},     {"im", v.imag()},
                  {"abs", std::abs(v)},   {"arg", std::arg(v)}, {"deviation", rows[i].rel_deviation}};
      if (q.plot_data) row["closed_form"] = wnpi::io::to_json(rows[i].closed_form);
      out.push_back(std::move(row));
    }
    const json doc = {{"k", q.k}, {"t", q.t}, {"n", q.n}, {"rows", out}};
    std::cout << (q.plot_data ? doc.dump(2) : doc.dump()) << '\n';
  } else {
    std::cout << "y,re,im,abs,arg,deviation";
    if (q.plot_data) std::cout << ",closed_re,closed_im";
    std::cout << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const cplx v = rows[i].grid_value;
      std::cout << format_double(ys[i]) << ',' << format_double(v.real()) << ',' << format_double(v.imag())
                << ',' << format_double(std::abs(v)) << ',' << format_double(std::arg(v)) << ','
                << format_double(rows[i].rel_deviation);
      if (q.plot_data) {
        std::cout << ',' << format_double(rows[i].closed_form.real()) << ','
                  << format_double(rows[i].closed_form.imag());
      }
      std::cout << '\n';
    }
  }
  return 0;
}

std::uint64_t default_seed() {
  if (const char* s = std::getenv("WNPI_SEED")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw wnpi::InputError(std::string("WNPI_SEED is not an unsigned integer: ") + s);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wnpi: white-noise path integrals at finite dimension"};
  app.require_subcommand(1);
  app.set_version_flag("--version", wnpi::kToolVersion);

  std::string spec_path, f_path;
  auto* tt = app.add_subcommand("ttransform", "Evaluate the T-transform of a Gauss kernel spec at f");
  tt->add_option("--spec", spec_path, "Gauss kernel spec (JSON)")->required();
  tt->add_option("--f", f_path, "test function (JSON funcspec or {grid, x_part, p_part})")->required();

  std::string suite = "all", dims = "1..3";
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  bool as_json = false;
  wnpi::SuiteOptions opt;
  auto* ver = app.add_subcommand("verify", "Run verification suites");
  ver->add_option("--suite", suite, "opalg, gauss, scaling, oracle, pathint or all")->capture_default_str();
  ver->add_option("--tol", tol, "override tolerances of deterministic checks");
  ver->add_option("--seed", seed, "RNG seed (default: $WNPI_SEED or 0)");
  ver->add_option("--samples", opt.samples, "Monte Carlo samples per check")->capture_default_str();
  ver->add_option("--dims", dims, "oracle corpus grid sizes n as lo..hi")->capture_default_str();
  ver->add_option("--threads", opt.threads, "Monte Carlo worker threads")->capture_default_str();
  ver->add_flag("--json", as_json, "emit the report as JSON");
  ver->add_flag("--timings", opt.timings, "record per-check runtimes");

  PropagatorQuery q;
  auto* prop = app.add_subcommand("propagator", "Harmonic oscillator propagator table on a grid");
  prop->add_option("--k", q.k, "spring constant k >= 0")->capture_default_str();
  prop->add_option("--t", q.t, "time t > 0")->capture_default_str();
  prop->add_option("--y-min", q.y_min)->capture_default_str();
  prop->add_option("--y-max", q.y_max)->capture_default_str();
  prop->add_option("--y-steps", q.y_steps)->capture_default_str();
  prop->add_option("--n", q.n, "grid cells")->capture_default_str();
  prop->add_option("--format", q.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  prop->add_flag("--plot-data", q.plot_data, "add closed-form columns for plotting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*tt) return cmd_ttransform(spec_path, f_path);
    if (*ver) {
      opt.tol = tol;
      opt.seed = seed ? *seed : default_seed();
      return cmd_verify(suite, opt, dims, as_json);
    }
    if (*prop) return cmd_propagator(q);
  } catch (const wnpi::InputError& e) {
    std::cerr << "wnpi: input error: " << e.what() << '\n';
    return 2;
  } catch (const wnpi::MathError& e) {
    std::cerr << "wnpi: math error: " << e.what() << '\n';
    return 3;
  } catch (const wnpi::InvariantError& e) {
    std::cerr << "wnpi: invariant violated: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "wnpi: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

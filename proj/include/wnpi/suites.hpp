#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wnpi/gausskernel.hpp"
#include "wnpi/report.hpp"

namespace wnpi {

struct SuiteOptions {
  std::optional<double> tol;  // overrides deterministic tolerances
  std::uint64_t seed = 0;
  long samples = 100'000;     // Monte Carlo samples per check
  int dims_min = 1;           // oracle suite: grid sizes n in [dims_min, dims_max]
  int dims_max = 3;
  bool timings = false;       // record runtime_ms (breaks byte-identical output)
  int threads = 1;
};

/// opalg, gauss, scaling, oracle, pathint, all.
const std::vector<std::string>& suite_names();

/// Runs one suite (or all). Throws InputError for an unknown name. Check
/// failures, including exceptions raised inside a check, are recorded in
/// the report rather than thrown.
RunReport run_suite(const std::string& name, const SuiteOptions& opt);

/// A named Gauss kernel with a test function, small enough for the oracle.
struct CorpusCase {
  std::string name;
  GaussKernelSpec spec;
  PhaseFunction f;
};

/// The fixed 12-case corpus (grids with n <= 3): vacuum, Donsker,
/// kinetic, kinetic with quadratic L, and two-pinning kernels.
std::vector<CorpusCase> lemma_corpus();

/// Mollifier width used by the Monte Carlo oracle checks.
inline constexpr double kMcBandwidth = 0.1;

}  // namespace wnpi

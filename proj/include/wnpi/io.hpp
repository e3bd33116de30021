#pragma once

#include <string>

#include <json.hpp>

#include "wnpi/chaos.hpp"
#include "wnpi/gausskernel.hpp"

namespace wnpi::io {

using json = nlohmann::json;

/// [re, im]; a bare number is accepted on input as a real value.
json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const TimeGrid& grid);
TimeGrid grid_from_json(const json& j);

/// {"grid": {...}, "x_part": [[re, im], ...], "p_part": [...]}
json to_json(const PhaseFunction& f);
PhaseFunction function_from_json(const json& j);

/// Function spec on a known grid:
///   {"kind": "zero"}
///   {"kind": "indicator", "a": A, "b": B, "component": "x"|"p", "scale": c?}
///   {"kind": "values", "x_part": [...], "p_part": [...]}
///   {"kind": "sum", "terms": [funcspec, ...]}
PhaseFunction funcspec_from_json(const json& j, const TimeGrid& grid);

/// A test function file: either a funcspec (has "kind") or a full
/// PhaseFunction whose grid must equal `grid`.
PhaseFunction test_function_from_json(const json& j, const TimeGrid& grid);

/// Operator spec on a known grid:
///   {"kind": "zero"|"identity"}
///   {"kind": "kinetic"|"free_n_inv"|"sqrt_r", "t": T}
///   {"kind": "volterra_ho", "t": T, "k": K}
///   {"kind": "dense", "xx": rows, "xp": rows, "px": rows, "pp": rows}
///   {"kind": "sum", "terms": [opspec, ...]}
///   {"kind": "scaled", "c": c, "op": opspec}
/// Dense blocks are arrays of rows of [re, im] pairs.
BlockOperator opspec_from_json(const json& j, const TimeGrid& grid);

/// {"grid": {...}, "K": opspec, "L": opspec, "g": funcspec?, "pinnings": [{"eta": funcspec, "y": y}]}
GaussKernelSpec spec_from_json(const json& j);

/// {"repr": "dense", "dim": m, "n_max": N, "kernels": [[[re, im], ...], ...]} with
/// flattened row-major kernels.
json to_json(const DenseChaos& phi);
DenseChaos dense_chaos_from_json(const json& j);

/// {"repr": "coherent", "grid": {...}, "terms": [{"w": [re, im], "xi": funcspec}]}
json to_json(const CoherentChaos& phi, const TimeGrid& grid);
CoherentChaos coherent_chaos_from_json(const json& j);

/// Parses a file; InputError on I/O or syntax errors.
json read_json_file(const std::string& path);

/// Shortest decimal string that round-trips to the same binary64.
std::string format_double(double x);

}  // namespace wnpi::io

#pragma once

#include <string>
#include <vector>

#include "magnls/grid.hpp"
#include "magnls/profiles.hpp"

namespace magnls {

/// Shortest round-trip decimal form of a double.
std::string format_number(double v);

/// Columns x1..xN, re, im. One row per node, axis 0 fastest.
void write_field_csv(const std::string& path, const ComplexField& u);
/// Columns x1..xN followed by one column per component.
void write_real_csv(const std::string& path, const std::vector<RealField>& comps, const std::vector<std::string>& names);
/// {"dim", "extents", "n", "h"} as a JSON object string.
std::string grid_header_json(const Grid& g);

/// Reads a complex field written by write_field_csv onto the given grid.
ComplexField read_field_csv(const std::string& path, const Grid& g);

/// Synthetic-sequence document:
/// {"grid": {"dim", "L", "n"}, "field": "<spec>", "K", "p", "lambda",
///  "profiles": [{"shape", "amplitude", "width", "phase", "wavevector",
///                "trajectory": {"start": [...], "step": [...]}}],
///  "noise": {"amplitude", "decay", "seed"}, "spreading": {"amplitude", "width"}}
SyntheticSpec parse_synthetic_spec(const std::string& json_text);
SyntheticSpec load_synthetic_spec(const std::string& path);

}  // namespace magnls

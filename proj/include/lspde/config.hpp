#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "lspde/errors.hpp"
#include "lspde/grid.hpp"
#include "lspde/levy_noise.hpp"
#include "lspde/poly.hpp"
#include "lspde/semilinear.hpp"

namespace lspde {

using json = nlohmann::json;

// Schema violations in configuration documents.
class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

json load_json(const std::filesystem::path& path);

// {"a": 1.0, "gamma": 0.0, "nu": [{"atom": [x, w]},
//   {"density": {"kind": "power", "coeff": c, "exponent": e, "lo": a, "hi": b}},
//   {"density": {"kind": "tabulated", "x": [...], "y": [...]}}]}
// Infinite bounds are written "inf" / "-inf".
LevyTriplet triplet_from_json(const json& j);
json triplet_to_json(const LevyTriplet& t);

// {"dim": d, "terms": [{"alpha": [..], "coeff": c}, ...]}
// or {"helmholtz": {"dim": d, "lambda": l, "power": n}}.
MultiPoly poly_from_json(const json& j);
json poly_to_json(const MultiPoly& p);

// "64x64:10x10"; a single box length applies to every axis ("64x64:10").
Grid parse_grid_spec(const std::string& spec);
std::string grid_spec(const Grid& g);

// "logpower:<m>" or "powerbeta:<beta>".
WeightFunction parse_weight(const std::string& spec);

// "builtin:sin", "builtin:tanh", "builtin:constant", "builtin:zero", or
// "tabulated:<file>" with {"y": [...], "g": [...]}; scaled by c.
Nonlinearity parse_nonlinearity(const std::string& spec, double c);

// Comma-separated reals; "inf" allowed.
std::vector<double> parse_real_list(const std::string& s);

}  // namespace lspde

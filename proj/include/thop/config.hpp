#pragma once

#include "thop/algebra.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace thop {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parsed problem description: the exponent, named multipliers, the operator
// expression over them, and grid overrides.
struct ProblemConfig {
    double p = 2.0;
    std::map<std::string, PCMultiplier> multipliers;
    OperatorExpr expr;
    ResolutionSpec grid;
    // generator list of the expression in config order, for oracle runs
    std::vector<std::pair<std::string, std::string>> generator_names;  // (T-name, H-name)
};

// Parse the JSON problem format.  Angles accept either radians or the exact
// "pi:<x>" form meaning x*pi; complex scalars accept a number or [re, im].
ProblemConfig parse_config_text(const std::string& text);
ProblemConfig parse_config_file(const std::string& path);

}  // namespace thop

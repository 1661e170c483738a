#pragma once

#include "thop/config.hpp"
#include "thop/index.hpp"

#include <iosfwd>
#include <string>

namespace thop {

// Exit codes shared by all subcommands: 0 success / Fredholm, 1 not
// Fredholm, 2 unresolved tolerance band, 3 input error.
enum ExitCode { kExitFredholm = 0, kExitNotFredholm = 1, kExitUnresolved = 2, kExitInputError = 3 };

struct CliOptions {
    double p_override = 0.0;  // 0 = keep config value
    int grid_t = 0;
    int grid_lambda = 0;
    bool doubled = false;
    std::string out_path;
};

ProblemConfig apply_overrides(ProblemConfig cfg, const CliOptions& opt);

int cmd_check(const ProblemConfig& cfg, std::ostream& os);
int cmd_index(const ProblemConfig& cfg, bool doubled, std::ostream& os);
int cmd_curve(const ProblemConfig& cfg, const std::string& out_path, std::ostream& os);
int cmd_spectrum(const ProblemConfig& cfg, const std::string& out_path, std::ostream& os);
int cmd_oracle(const ProblemConfig& cfg, std::ostream& os);

// Deterministic CSV writers (17 significant digits; the lambda column uses
// the literal strings "-inf"/"+inf" at the sweep endpoints).
void write_curve_csv(const OrientedCurve& curve, std::ostream& os);
void write_spectrum_csv(const std::vector<SpectrumPoint>& cloud, std::ostream& os);

// Winding recomputed from an exported curve CSV (round-trip check).
int winding_from_curve_csv(std::istream& is);

}  // namespace thop

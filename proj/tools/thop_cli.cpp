// Command line front end: Fredholm checks, indices, curve and spectrum
// exports, and the oracle cross-check suite for Toeplitz+Hankel operators
// with piecewise continuous symbols on l^p.

#include "thop/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Fredholm property and index for Toeplitz+Hankel operators on l^p"};
    app.require_subcommand(1);

    std::string config_path;
    thop::CliOptions opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config_path, "problem description file (JSON)")
            ->required();
        sub->add_option("--p", opt.p_override, "override the exponent p");
        sub->add_option("--grid-t", opt.grid_t, "t samples per continuity segment");
        sub->add_option("--grid-lambda", opt.grid_lambda, "lambda samples per sweep");
    };

    CLI::App* check = app.add_subcommand("check", "decide the Fredholm property");
    add_common(check);
    CLI::App* index = app.add_subcommand("index", "compute the Fredholm index");
    add_common(index);
    index->add_flag("--doubled", opt.doubled,
                    "also run the doubled 2x2 matrix operator");
    CLI::App* curve = app.add_subcommand("curve", "export the symbol curve W as CSV");
    add_common(curve);
    curve->add_option("--out", opt.out_path, "output CSV path")->required();
    CLI::App* spectrum = app.add_subcommand("spectrum", "export the essential spectrum cloud");
    add_common(spectrum);
    spectrum->add_option("--out", opt.out_path, "output CSV path")->required();
    CLI::App* oracle = app.add_subcommand("oracle", "run the applicable oracle cross checks");
    add_common(oracle);

    CLI11_PARSE(app, argc, argv);

    thop::ProblemConfig cfg;
    try {
        cfg = thop::apply_overrides(thop::parse_config_file(config_path), opt);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return thop::kExitInputError;
    }

    try {
        if (check->parsed()) return thop::cmd_check(cfg, std::cout);
        if (index->parsed()) return thop::cmd_index(cfg, opt.doubled, std::cout);
        if (curve->parsed()) return thop::cmd_curve(cfg, opt.out_path, std::cout);
        if (spectrum->parsed()) return thop::cmd_spectrum(cfg, opt.out_path, std::cout);
        if (oracle->parsed()) return thop::cmd_oracle(cfg, std::cout);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return thop::kExitInputError;
    }
    return thop::kExitInputError;
}

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nmme/errors.hpp"
#include "runner.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    bool dump_tables = false;
    int threads = -1;  // -1: not given on the command line
};

void add_common(CLI::App* cmd, CommonArgs& args, bool needs_config = true) {
    auto* opt = cmd->add_option("--config", args.config_path, "path to the run configuration file");
    if (needs_config) opt->required();
    cmd->add_option("--out", args.out_dir, "output directory (overrides [output] dir)");
    cmd->add_flag("--dump-tables", args.dump_tables, "also write the solved coefficient tables");
    cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
}

nmme::cli::RunConfig load(const CommonArgs& args) {
    nmme::cli::RunConfig cfg = nmme::cli::parse_config_file(args.config_path);
    if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
    if (args.dump_tables) cfg.dump_tables = true;
    if (args.threads >= 0) {
        cfg.threads = args.threads;  // flag wins over the environment
    } else if (const char* env = std::getenv("NMME_THREADS")) {
        cfg.threads = std::atoi(env);
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-Markovian master-equation engine for dissipative quantum-optics models"};
    app.require_subcommand(1);

    CommonArgs coeffs_args, prop_args, cmp_args, unravel_args;
    auto* coeffs = app.add_subcommand("coeffs", "solve the coefficient time series");
    add_common(coeffs, coeffs_args);
    auto* prop = app.add_subcommand("propagate", "solve coefficients and propagate the state");
    add_common(prop, prop_args);
    auto* cmp = app.add_subcommand("compare", "run both coefficient routes and report gaps/timings");
    add_common(cmp, cmp_args);
    auto* unravel = app.add_subcommand("unravel", "Monte Carlo stochastic unraveling");
    add_common(unravel, unravel_args);
    app.add_subcommand("selftest", "run the built-in smoke battery");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (coeffs->parsed()) return nmme::cli::run_coeffs(load(coeffs_args));
        if (prop->parsed()) return nmme::cli::run_propagate(load(prop_args));
        if (cmp->parsed()) return nmme::cli::run_compare(load(cmp_args));
        if (unravel->parsed()) return nmme::cli::run_unravel(load(unravel_args));
        return nmme::cli::run_selftest();
    } catch (const nmme::ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nmme::SingularityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const nmme::TruncationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const nmme::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// runner.hpp — subcommand pipelines: kernels -> tables -> coefficients ->
// propagation / ensemble -> CSV reports

#pragma once

#include "config.hpp"

namespace nmme::cli {

struct ComparisonReport {
    double max_abs[3]{0.0, 0.0, 0.0};
    double max_rel[3]{0.0, 0.0, 0.0};  // relative to max_t |B_j|
    double seconds_integral{0.0};
    double seconds_green{0.0};
};

int run_coeffs(const RunConfig& cfg);
int run_propagate(const RunConfig& cfg);
int run_compare(const RunConfig& cfg);
int run_unravel(const RunConfig& cfg);
int run_selftest();

// Shared by run_compare and the acceptance suite: both coefficient routes on
// one scenario, gaps and timings. Kernel sampling is shared preparation and
// excluded from the route timers.
ComparisonReport compare_methods(const Scenario& scenario, const TimeGrid& grid,
                                 const SolverPolicy& policy, const std::string& csv_path);

}  // namespace nmme::cli

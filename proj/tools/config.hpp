// config.hpp — run configuration: INI-style file with sections
// [scenario] [bath] [grid] [method] [output]

#pragma once

#include <cstdint>
#include <string>

#include "nmme/coefffuncs.hpp"
#include "nmme/dynamics.hpp"

namespace nmme::cli {

enum class RunMethod { integral, green, both, unravel };

struct RunConfig {
    Scenario scenario;
    TimeGrid grid;
    RunMethod method{RunMethod::integral};
    SolverPolicy policy;
    long n_traj{10000};
    std::uint64_t seed{1};
    std::string out_dir{"."};
    bool dump_tables{false};
    int threads{0};  // 0 = auto
};

// Parses and validates; throws ConfigError with the offending key in the message.
RunConfig parse_config_file(const std::string& path);

// Two-column CSV (comments and a header line allowed); used for tabulated
// spectral densities and drives.
std::pair<std::vector<double>, std::vector<double>> read_two_column_csv(const std::string& path);

}  // namespace nmme::cli

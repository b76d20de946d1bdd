#include "runner.hpp"

#include <chrono>
#include <filesystem>
#include <iostream>

#include "csv.hpp"
#include "nmme/assemble.hpp"
#include "nmme/errors.hpp"
#include "nmme/green.hpp"
#include "nmme/unravel.hpp"

namespace nmme::cli {

namespace {

namespace fs = std::filesystem;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_out_dir(const RunConfig& cfg) {
    std::error_code ec;
    fs::create_directories(cfg.out_dir, ec);
    if (ec) throw ConfigError("output: cannot create directory " + cfg.out_dir);
}

void dump_two_var(const TwoVarTable& table, const std::string& path) {
    CsvWriter csv(path, "i,j,t_i,t_j,re,im");
    for (int i = 0; i <= table.grid().n; ++i) {
        auto row = table.row(i);
        for (int j = 0; j <= i; ++j)
            csv.row(i, j, table.grid().node(i), table.grid().node(j), row[j].real(), row[j].imag());
    }
}

void dump_one_var(const OneVarTable& table, const std::string& path) {
    CsvWriter csv(path, "k,s,re,im");
    for (int k = 0; k <= table.grid.n; ++k)
        csv.row(k, table.grid.node(k), table.values[k].real(), table.values[k].imag());
}

void write_real_series(const CoeffSeries& s, const std::string& path) {
    if (s.kind == CoeffKind::two_state) {
        CsvWriter csv(path, "t,R,S");
        for (int k = 0; k <= s.grid.n; ++k) csv.row(s.grid.node(k), s.c1[k], s.c2[k]);
        return;
    }
    CsvWriter csv(path, s.kind == CoeffKind::oracle ? "t,B1,B2,B3" : "t,A1,A2,A3");
    for (int k = 0; k <= s.grid.n; ++k) csv.row(s.grid.node(k), s.c1[k], s.c2[k], s.c3[k]);
}

void write_driven_series(const CoeffSeries& s, const std::string& path) {
    CsvWriter csv(path, "t,ReC,ImC,ReD,ImD");
    for (int k = 0; k <= s.grid.n; ++k)
        csv.row(s.grid.node(k), s.C[k].real(), s.C[k].imag(), s.D[k].real(), s.D[k].imag());
}

void write_trajectory(const Trajectory& traj, const std::string& path) {
    CsvWriter csv(path, "t,trace,purity,n_or_pe,re_coh,im_coh");
    for (std::size_t k = 0; k < traj.t.size(); ++k) {
        const auto& rec = traj.samples[k];
        csv.row(traj.t[k], rec.trace, rec.purity, rec.n_or_pe, rec.coherence.real(),
                rec.coherence.imag());
    }
}

struct IntegralRoute {
    CavityTables tables;         // cavity kinds
    TwoVarTable x_tsa;           // two-state
    CoeffSeries coeffs;          // A series or R/S series
    std::optional<CoeffSeries> driven;
};

IntegralRoute solve_integral_route(const Scenario& scenario, const ResponseKernel& kernel,
                                   const TimeGrid& grid, const SolverPolicy& policy) {
    IntegralRoute route;
    if (scenario.kind == ScenarioKind::two_state) {
        route.x_tsa = solve_x_tsa(kernel, scenario.omega0, grid, policy);
        route.coeffs = assemble_RS(kernel, route.x_tsa);
        return route;
    }
    const Drive* drive = scenario.drive ? &*scenario.drive : nullptr;
    route.tables = solve_cavity_tables(kernel, scenario.omega0, grid, policy, drive);
    route.coeffs =
        assemble_A(kernel, route.tables.x11, route.tables.x21, route.tables.y, scenario.omega0);
    if (drive) route.driven = assemble_CD(kernel, *route.tables.x13, *scenario.drive);
    return route;
}

void dump_route_tables(const IntegralRoute& route, const Scenario& scenario,
                       const RunConfig& cfg) {
    if (!cfg.dump_tables) return;
    if (scenario.kind == ScenarioKind::two_state) {
        dump_two_var(route.x_tsa, join(cfg.out_dir, "x_tsa.csv"));
        return;
    }
    dump_two_var(route.tables.x11, join(cfg.out_dir, "x11.csv"));
    dump_two_var(route.tables.x12, join(cfg.out_dir, "x12.csv"));
    dump_two_var(route.tables.y, join(cfg.out_dir, "y.csv"));
    dump_one_var(route.tables.x21, join(cfg.out_dir, "x21.csv"));
    if (route.tables.x13) dump_two_var(*route.tables.x13, join(cfg.out_dir, "x13.csv"));
}

CoeffSeries green_route_coeffs(const Scenario& scenario, const ResponseKernel& fine,
                               const RunConfig& cfg, const TimeGrid& grid) {
    if (scenario.kind == ScenarioKind::two_state)
        throw ConfigError("method: the two-state coefficients come from the integral route");
    const GreenSolution green = solve_green(fine, scenario.omega0, grid);
    const XbarTables tables = xbar_tables(green);
    if (cfg.dump_tables) {
        CsvWriter csv(join(cfg.out_dir, "u.csv"), "k,t,re,im");
        for (int k = 0; k <= grid.n; ++k)
            csv.row(k, grid.node(k), green.u[k].real(), green.u[k].imag());
        dump_two_var(green.v, join(cfg.out_dir, "v.csv"));
    }
    return assemble_B(fine.decimated(), tables, scenario.omega0);
}

}  // namespace

ComparisonReport compare_methods(const Scenario& scenario, const TimeGrid& grid,
                                 const SolverPolicy& policy, const std::string& csv_path) {
    if (scenario.kind == ScenarioKind::two_state)
        throw ConfigError("compare: route comparison applies to cavity scenarios");
    const ResponseKernel fine = sample_kernels(scenario.bath, scenario.temperature, refined(grid));
    const ResponseKernel kernel = fine.decimated();

    auto t0 = std::chrono::steady_clock::now();
    CavityTables tables = solve_cavity_tables(kernel, scenario.omega0, grid, policy);
    const CoeffSeries a = assemble_A(kernel, tables.x11, tables.x21, tables.y, scenario.omega0);
    const double t_integral = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const GreenSolution green = solve_green(fine, scenario.omega0, grid);
    const XbarTables xbars = xbar_tables(green);
    const CoeffSeries b = assemble_B(kernel, xbars, scenario.omega0);
    const double t_green = seconds_since(t0);

    ComparisonReport report;
    report.seconds_integral = t_integral;
    report.seconds_green = t_green;
    double bmax[3] = {0.0, 0.0, 0.0};
    for (int k = 0; k <= grid.n; ++k) {
        const double* av[3] = {&a.c1[k], &a.c2[k], &a.c3[k]};
        const double* bv[3] = {&b.c1[k], &b.c2[k], &b.c3[k]};
        for (int j = 0; j < 3; ++j) {
            report.max_abs[j] = std::max(report.max_abs[j], std::abs(*av[j] - *bv[j]));
            bmax[j] = std::max(bmax[j], std::abs(*bv[j]));
        }
    }
    for (int j = 0; j < 3; ++j)
        report.max_rel[j] = bmax[j] > 0.0 ? report.max_abs[j] / bmax[j] : report.max_abs[j];

    if (!csv_path.empty()) {
        CsvWriter csv(csv_path,
                      "t,A1,B1,A2,B2,A3,B3,abs_gap1,abs_gap2,abs_gap3,rel_gap1,rel_gap2,rel_gap3");
        for (int k = 0; k <= grid.n; ++k) {
            const double g1 = std::abs(a.c1[k] - b.c1[k]);
            const double g2 = std::abs(a.c2[k] - b.c2[k]);
            const double g3 = std::abs(a.c3[k] - b.c3[k]);
            csv.row(grid.node(k), a.c1[k], b.c1[k], a.c2[k], b.c2[k], a.c3[k], b.c3[k], g1, g2, g3,
                    bmax[0] > 0 ? g1 / bmax[0] : g1, bmax[1] > 0 ? g2 / bmax[1] : g2,
                    bmax[2] > 0 ? g3 / bmax[2] : g3);
        }
    }
    return report;
}

int run_coeffs(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    if (cfg.method == RunMethod::unravel)
        throw ConfigError("coeffs: method=unravel has no coefficient series; use the unravel command");
    const bool want_integral = cfg.method != RunMethod::green;
    const bool want_green = cfg.method != RunMethod::integral;

    const ResponseKernel fine =
        sample_kernels(cfg.scenario.bath, cfg.scenario.temperature, refined(cfg.grid));
    const ResponseKernel kernel = fine.decimated();

    if (want_integral) {
        const IntegralRoute route = solve_integral_route(cfg.scenario, kernel, cfg.grid, cfg.policy);
        write_real_series(route.coeffs, join(cfg.out_dir, "coeffs.csv"));
        if (route.driven) write_driven_series(*route.driven, join(cfg.out_dir, "coeffs_driven.csv"));
        dump_route_tables(route, cfg.scenario, cfg);
    }
    if (want_green) {
        const CoeffSeries b = green_route_coeffs(cfg.scenario, fine, cfg, cfg.grid);
        write_real_series(b, join(cfg.out_dir,
                                  want_integral ? "coeffs_green.csv" : "coeffs.csv"));
    }
    if (cfg.method == RunMethod::both) {
        const ComparisonReport report =
            compare_methods(cfg.scenario, cfg.grid, cfg.policy, join(cfg.out_dir, "compare.csv"));
        std::cout << "compare: max relative gaps " << report.max_rel[0] << " " << report.max_rel[1]
                  << " " << report.max_rel[2] << "\n";
    }
    std::cout << "coeffs: wrote " << join(cfg.out_dir, "coeffs.csv") << "\n";
    return 0;
}

int run_propagate(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    if (cfg.method == RunMethod::unravel)
        throw ConfigError("propagate: method=unravel is the stochastic route; use the unravel command");

    const ResponseKernel fine =
        sample_kernels(cfg.scenario.bath, cfg.scenario.temperature, refined(cfg.grid));
    const ResponseKernel kernel = fine.decimated();

    CoeffSeries coeffs;
    std::optional<CoeffSeries> driven;
    if (cfg.method == RunMethod::green) {
        coeffs = green_route_coeffs(cfg.scenario, fine, cfg, cfg.grid);
        write_real_series(coeffs, join(cfg.out_dir, "coeffs.csv"));
    } else {
        const IntegralRoute route = solve_integral_route(cfg.scenario, kernel, cfg.grid, cfg.policy);
        coeffs = route.coeffs;
        driven = route.driven;
        write_real_series(coeffs, join(cfg.out_dir, "coeffs.csv"));
        if (driven) write_driven_series(*driven, join(cfg.out_dir, "coeffs_driven.csv"));
        dump_route_tables(route, cfg.scenario, cfg);
        if (cfg.method == RunMethod::both) {
            const ComparisonReport report = compare_methods(cfg.scenario, cfg.grid, cfg.policy,
                                                            join(cfg.out_dir, "compare.csv"));
            std::cout << "compare: max relative gaps " << report.max_rel[0] << " "
                      << report.max_rel[1] << " " << report.max_rel[2] << "\n";
        }
    }

    const Trajectory traj =
        propagate(cfg.scenario, coeffs, driven ? &*driven : nullptr);
    write_trajectory(traj, join(cfg.out_dir, "observables.csv"));
    std::cout << "propagate: wrote " << join(cfg.out_dir, "observables.csv")
              << " (max trace drift " << traj.max_trace_drift << ", max hermiticity defect "
              << traj.max_hermiticity_defect << ")\n";
    return 0;
}

int run_compare(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    if (cfg.method != RunMethod::both)
        throw ConfigError("compare: requires method = both");
    const ComparisonReport report =
        compare_methods(cfg.scenario, cfg.grid, cfg.policy, join(cfg.out_dir, "compare.csv"));
    std::cout << "compare: max abs gaps " << report.max_abs[0] << " " << report.max_abs[1] << " "
              << report.max_abs[2] << "\n";
    std::cout << "compare: max relative gaps " << report.max_rel[0] << " " << report.max_rel[1]
              << " " << report.max_rel[2] << "\n";
    std::cout << "compare: integral route " << report.seconds_integral << " s, green route "
              << report.seconds_green << " s\n";
    return 0;
}

int run_unravel(const RunConfig& cfg) {
    ensure_out_dir(cfg);
    if (cfg.method != RunMethod::unravel)
        throw ConfigError("unravel: requires method = unravel");
    const EnsembleResult result =
        run_ensemble(cfg.scenario, cfg.grid, cfg.n_traj, cfg.seed, NoiseChannelSet::full,
                     cfg.threads);
    CsvWriter csv(join(cfg.out_dir, "ensemble.csv"),
                  "t,mean_obs,stderr_obs,mean_trace,stderr_trace,n_used");
    for (std::size_t k = 0; k < result.t.size(); ++k)
        csv.row(result.t[k], result.mean_obs[k], result.stderr_obs[k], result.mean_trace[k],
                result.stderr_trace[k], double(result.n_used));
    std::cout << "unravel: wrote " << join(cfg.out_dir, "ensemble.csv") << " (" << result.n_used
              << " used, " << result.n_excluded << " excluded)\n";
    return 0;
}

}  // namespace nmme::cli

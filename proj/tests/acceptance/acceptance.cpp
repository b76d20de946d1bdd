// acceptance.cpp — the acceptance gate: one pass/fail line per criterion.
//
//  1. route equivalence of the two coefficient methods on the reference
//     scenario, with second-order gap shrink under refinement
//  2. two-state decay identity rho_ee = |u|^2 against the conjugate-kernel
//     propagator, oracle relation pre-verified through the rate integral
//  3. exponential-kernel closed form for u
//  4. structural invariants (trace, hermiticity, tracelessness, D = -conj C,
//     realness) across every run of this suite
//  5. zero-coupling limits
//  6. Monte Carlo consistency of the stochastic unraveling
//  7. translation invariance of the one-variable coefficient function
//  8. measured complexity: the integral route scales worse than the
//     propagator route

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "nmme/assemble.hpp"
#include "nmme/coefffuncs.hpp"
#include "nmme/dynamics.hpp"
#include "nmme/green.hpp"
#include "nmme/unravel.hpp"

using namespace nmme;

namespace {

struct Criterion {
    bool passed = true;
    std::string detail;
};
Criterion results[9];

void note(int k, bool ok, const std::string& what) {
    if (!ok && results[k].detail.empty()) results[k].detail = what;
    if (!ok) results[k].passed = false;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct RouteGaps {
    double rel[3];
    double t_integral;
    double t_green;
};

RouteGaps route_gaps(const Scenario& sc, int n) {
    const TimeGrid grid = TimeGrid::from_horizon(4.0, n);
    const ResponseKernel fine = sample_kernels(sc.bath, sc.temperature, refined(grid));
    const ResponseKernel kernel = fine.decimated();

    auto t0 = std::chrono::steady_clock::now();
    const CavityTables tables = solve_cavity_tables(kernel, sc.omega0, grid);
    const CoeffSeries a = assemble_A(kernel, tables.x11, tables.x21, tables.y, sc.omega0);
    const double ti = seconds_since(t0);

    t0 = std::chrono::steady_clock::now();
    const CoeffSeries b =
        assemble_B(kernel, xbar_tables(solve_green(fine, sc.omega0, grid)), sc.omega0);
    const double tg = seconds_since(t0);

    RouteGaps out{{0.0, 0.0, 0.0}, ti, tg};
    double bmax[3] = {0.0, 0.0, 0.0};
    for (int k = 0; k <= grid.n; ++k) {
        const double gaps[3] = {std::abs(a.c1[k] - b.c1[k]), std::abs(a.c2[k] - b.c2[k]),
                                std::abs(a.c3[k] - b.c3[k])};
        const double mags[3] = {std::abs(b.c1[k]), std::abs(b.c2[k]), std::abs(b.c3[k])};
        for (int j = 0; j < 3; ++j) {
            out.rel[j] = std::max(out.rel[j], gaps[j]);
            bmax[j] = std::max(bmax[j], mags[j]);
        }
    }
    for (int j = 0; j < 3; ++j) out.rel[j] /= bmax[j];
    return out;
}

double max_structural_trace_drift = 0.0;
double max_structural_herm_defect = 0.0;

void fold_structure(const Trajectory& traj) {
    max_structural_trace_drift = std::max(max_structural_trace_drift, traj.max_trace_drift);
    max_structural_herm_defect = std::max(max_structural_herm_defect, traj.max_hermiticity_defect);
}

}  // namespace

int main() {
    const double w0 = 1.0;
    char buf[256];

    // ---- criterion 1 + 8: route equivalence and measured scaling ----------
    {
        const auto t0 = std::chrono::steady_clock::now();
        Scenario sc;
        sc.kind = ScenarioKind::cavity;
        sc.omega0 = w0;
        sc.bath = OhmicExp{0.05, 5.0};
        sc.temperature = Temperature::inverse(1.0);
        sc.n_max = 10;
        sc.initial = FockState{1};

        const RouteGaps g400 = route_gaps(sc, 400);
        const RouteGaps g800 = route_gaps(sc, 800);
        for (int j = 0; j < 3; ++j) {
            note(1, g400.rel[j] <= 5e-4,
                 "relative gap " + std::to_string(g400.rel[j]) + " for coefficient " +
                     std::to_string(j + 1));
            const double shrink = g400.rel[j] / g800.rel[j];
            note(1, shrink >= 3.0 && shrink <= 5.0,
                 "gap shrink " + std::to_string(shrink) + " outside [3, 5]");
        }
        const double elapsed = seconds_since(t0);
        note(1, elapsed <= 120.0, "runtime " + std::to_string(elapsed) + " s > 120 s");
        std::snprintf(buf, sizeof buf,
                      "rel gaps N=400 (%.2e, %.2e, %.2e), shrink x (%.2f, %.2f, %.2f), %.1f s",
                      g400.rel[0], g400.rel[1], g400.rel[2], g400.rel[0] / g800.rel[0],
                      g400.rel[1] / g800.rel[1], g400.rel[2] / g800.rel[2], elapsed);
        if (results[1].passed) results[1].detail = buf;

        const double ratio_integral = g800.t_integral / g400.t_integral;
        const double ratio_green = g800.t_green / g400.t_green;
        note(8, ratio_integral > ratio_green,
             "integral ratio " + std::to_string(ratio_integral) + " does not exceed green ratio " +
                 std::to_string(ratio_green));
        std::snprintf(buf, sizeof buf,
                      "N->2N time ratios: integral %.1fx (%.2fs -> %.2fs), green %.1fx (%.2fs -> %.2fs)",
                      ratio_integral, g400.t_integral, g800.t_integral, ratio_green, g400.t_green,
                      g800.t_green);
        if (results[8].passed) results[8].detail = buf;
    }

    // ---- criterion 2: two-state decay identity ----------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        Scenario sc;
        sc.kind = ScenarioKind::two_state;
        sc.omega0 = w0;
        sc.bath = LorentzianExtended{0.2, 1.0, w0};
        sc.temperature = Temperature::zero();
        sc.initial = ExcitedState{};
        const TimeGrid grid = TimeGrid::from_horizon(10.0, 500);

        const ResponseKernel kernel = sample_kernels(sc.bath, sc.temperature, grid);
        const CoeffSeries rs = assemble_RS(kernel, solve_x_tsa(kernel, w0, grid));
        const Trajectory traj = propagate(sc, rs);
        fold_structure(traj);

        const ResponseKernel fine =
            sample_kernels(sc.bath, sc.temperature, refined(grid)).conjugated();
        const auto u = solve_u(fine, w0, grid);

        // oracle relation first: int R dt == -2 ln |u(T)|
        double rate_integral = 0.0;
        for (int k = 0; k <= grid.n; ++k)
            rate_integral += detail::trap_weight(k, 0, grid.n, grid.h) * rs.c1[k];
        const double log_decay = -2.0 * std::log(std::abs(u[grid.n]));
        note(2, std::abs(rate_integral - log_decay) <= 1e-3,
             "rate integral " + std::to_string(rate_integral) + " vs log decay " +
                 std::to_string(log_decay));

        double gap = 0.0;
        for (std::size_t s = 0; s < traj.t.size(); ++s)
            gap = std::max(gap, std::abs(traj.samples[s].n_or_pe - std::norm(u[2 * s])));
        note(2, gap <= 1e-4, "population gap " + std::to_string(gap) + " > 1e-4");
        const double elapsed = seconds_since(t0);
        note(2, elapsed <= 30.0, "runtime " + std::to_string(elapsed) + " s > 30 s");
        std::snprintf(buf, sizeof buf, "max |rho_ee - |u|^2| = %.2e, rate-vs-log gap %.2e, %.1f s",
                      gap, std::abs(rate_integral - log_decay), elapsed);
        if (results[2].passed) results[2].detail = buf;
    }

    // ---- criterion 3: exponential-kernel closed form -----------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        const double gamma0 = 0.3, lambda = 1.5, wc = 0.8;
        const TimeGrid grid = TimeGrid::from_horizon(8.0, 4000);
        const ResponseKernel fine = sample_kernels(LorentzianExtended{gamma0, lambda, wc},
                                                   Temperature::zero(), refined(grid));
        const auto u = solve_u(fine, w0, grid);

        // closed form via the 2x2 constant-coefficient reduction
        const cplx g(0.5 * gamma0 * lambda, 0.0);
        const cplx rate(-lambda, -wc);
        const cplx a(0.0, -w0);
        const cplx tr = a + rate;
        const cplx disc = std::sqrt(tr * tr - 4.0 * (a * rate + g));
        const cplx mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
        double gap = 0.0;
        for (int k = 0; k <= grid.n; ++k) {
            const double t = grid.node(k);
            const cplx exact =
                (std::exp(mu1 * t) * (mu1 - rate) - std::exp(mu2 * t) * (mu2 - rate)) / (mu1 - mu2);
            gap = std::max(gap, std::abs(u[k] - exact));
        }
        note(3, gap <= 1e-6, "closed-form gap " + std::to_string(gap) + " > 1e-6");
        const double elapsed = seconds_since(t0);
        note(3, elapsed <= 5.0, "runtime " + std::to_string(elapsed) + " s > 5 s");
        std::snprintf(buf, sizeof buf, "max |u - closed form| = %.2e, %.2f s", gap, elapsed);
        if (results[3].passed) results[3].detail = buf;
    }

    // ---- criterion 5: zero-coupling limits ---------------------------------
    {
        Scenario sc;
        sc.kind = ScenarioKind::cavity;
        sc.omega0 = w0;
        sc.bath = NullBath{};
        sc.temperature = Temperature::inverse(1.0);
        sc.n_max = 16;
        sc.initial = FockState{1};
        const TimeGrid grid = TimeGrid::from_horizon(4.0, 400);
        const ResponseKernel kernel = sample_kernels(sc.bath, sc.temperature, grid);
        const CavityTables tables = solve_cavity_tables(kernel, w0, grid);
        const CoeffSeries a = assemble_A(kernel, tables.x11, tables.x21, tables.y, w0);
        bool exact = true;
        for (int k = 0; k <= grid.n; ++k)
            exact = exact && a.c1[k] == w0 && a.c2[k] == 0.0 && a.c3[k] == 0.0;
        note(5, exact, "null-kernel cavity coefficients are not (w0, 0, 0)");

        const ResponseKernel zt = sample_kernels(sc.bath, Temperature::zero(), grid);
        const CoeffSeries rs = assemble_RS(zt, solve_x_tsa(zt, w0, grid));
        bool rszero = true;
        for (int k = 0; k <= grid.n; ++k) rszero = rszero && rs.c1[k] == 0.0 && rs.c2[k] == 0.0;
        note(5, rszero, "null-kernel two-state coefficients are not zero");

        const Trajectory unitary = propagate(sc, a);
        fold_structure(unitary);
        double ngap = 0.0;
        for (const auto& rec : unitary.samples) ngap = std::max(ngap, std::abs(rec.n_or_pe - 1.0));
        note(5, ngap <= 1e-10, "photon number drift " + std::to_string(ngap));

        Scenario driven = sc;
        driven.kind = ScenarioKind::driven_cavity;
        driven.initial = CoherentState{cplx(0.6, 0.0)};
        driven.drive = Drive(ConstantDrive{0.25});
        const CavityTables dtables = solve_cavity_tables(kernel, w0, grid, {}, &*driven.drive);
        const CoeffSeries da = assemble_A(kernel, dtables.x11, dtables.x21, dtables.y, w0);
        const CoeffSeries cd = assemble_CD(kernel, *dtables.x13, *driven.drive);
        bool dexact = true;
        for (int k = 0; k <= grid.n; ++k) dexact = dexact && cd.D[k] == -std::conj(cd.C[k]);
        note(4, dexact, "D != -conj(C) on the driven run");
        const Trajectory dtraj = propagate(driven, da, &cd);
        fold_structure(dtraj);
        double agap = 0.0;
        for (std::size_t s = 0; s < dtraj.t.size(); ++s) {
            const double t = dtraj.t[s];
            const cplx ph = std::exp(cplx(0.0, -w0 * t));
            const cplx exact_alpha = ph * cplx(0.6, 0.0) - (0.25 / w0) * (1.0 - ph);
            agap = std::max(agap, std::abs(dtraj.samples[s].coherence - exact_alpha));
        }
        note(5, agap <= 1e-8, "displacement gap " + std::to_string(agap));
        std::snprintf(buf, sizeof buf,
                      "exact (w0,0,0) and R=S=0, photon drift %.1e, displacement gap %.1e", ngap,
                      agap);
        if (results[5].passed) results[5].detail = buf;
    }

    // ---- criterion 6: Monte Carlo consistency ------------------------------
    {
        const auto t0 = std::chrono::steady_clock::now();
        Scenario sc;
        sc.kind = ScenarioKind::two_state;
        sc.omega0 = w0;
        sc.bath = LorentzianExtended{0.2, 1.0, w0};
        sc.temperature = Temperature::zero();
        sc.initial = ExcitedState{};
        const TimeGrid grid = TimeGrid::from_horizon(2.5, 250);  // gamma0 T = 0.5

        const ResponseKernel kernel = sample_kernels(sc.bath, sc.temperature, grid);
        const CoeffSeries rs = assemble_RS(kernel, solve_x_tsa(kernel, w0, grid));
        const Trajectory det = propagate(sc, rs);
        fold_structure(det);

        const EnsembleResult ens = run_ensemble(sc, grid, 10000, 42);
        bool mean_ok = true, trace_ok = true;
        double worst_pull = 0.0;
        for (std::size_t s = 0; s < ens.t.size(); ++s) {
            const double gap = std::abs(ens.mean_obs[s] - det.samples[s].n_or_pe);
            if (ens.stderr_obs[s] > 0.0)
                worst_pull = std::max(worst_pull, gap / ens.stderr_obs[s]);
            mean_ok = mean_ok && gap <= 3.0 * ens.stderr_obs[s] + 1e-12;
            trace_ok =
                trace_ok && std::abs(ens.mean_trace[s] - 1.0) <= 3.0 * ens.stderr_trace[s] + 1e-12;
        }
        note(6, mean_ok, "ensemble mean leaves the 3 SE band (worst pull " +
                             std::to_string(worst_pull) + ")");
        note(6, trace_ok, "ensemble trace leaves the 3 SE band around 1");

        // standard error scaling across decades
        double logn[3], logse[3];
        const long sizes[3] = {100, 1000, 10000};
        for (int k = 0; k < 3; ++k) {
            const EnsembleResult e = run_ensemble(sc, grid, sizes[k], 1000 + k);
            double se = 0.0;
            for (std::size_t s = 1; s < e.t.size(); ++s) se += e.stderr_obs[s];
            se /= double(e.t.size() - 1);
            logn[k] = std::log10(double(sizes[k]));
            logse[k] = std::log10(se);
        }
        const double mean_x = (logn[0] + logn[1] + logn[2]) / 3.0;
        const double mean_y = (logse[0] + logse[1] + logse[2]) / 3.0;
        double num = 0.0, den = 0.0;
        for (int k = 0; k < 3; ++k) {
            num += (logn[k] - mean_x) * (logse[k] - mean_y);
            den += (logn[k] - mean_x) * (logn[k] - mean_x);
        }
        const double slope = num / den;
        note(6, slope >= -0.6 && slope <= -0.4,
             "standard-error slope " + std::to_string(slope) + " outside [-0.6, -0.4]");
        const double elapsed = seconds_since(t0);
        note(6, elapsed <= 300.0, "runtime " + std::to_string(elapsed) + " s > 300 s");
        std::snprintf(buf, sizeof buf, "worst pull %.2f SE, SE slope %.3f, %.1f s", worst_pull,
                      slope, elapsed);
        if (results[6].passed) results[6].detail = buf;
    }

    // ---- criterion 7: translation invariance -------------------------------
    {
        const TimeGrid grid = TimeGrid::from_horizon(4.0, 64);
        const ResponseKernel kernel =
            sample_kernels(OhmicExp{0.05, 5.0}, Temperature::inverse(1.0), grid);
        const double disc = verify_x21_translation_invariance(kernel, w0, grid);
        note(7, disc <= 10.0 * grid.h * grid.h,
             "discrepancy " + std::to_string(disc) + " > 10 h^2");
        std::snprintf(buf, sizeof buf, "2D-vs-1D discrepancy %.2e <= %.2e", disc,
                      10.0 * grid.h * grid.h);
        if (results[7].passed) results[7].detail = buf;
    }

    // ---- criterion 4: structural invariants --------------------------------
    {
        std::mt19937 rng(2024);
        std::normal_distribution<double> dist(0.0, 1.0);
        const LadderOps cavity_ops(8);
        const LadderOps spin_ops(2);
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            Eigen::MatrixXcd m(8, 8);
            for (int i = 0; i < 8; ++i)
                for (int j = 0; j < 8; ++j) m(i, j) = cplx(dist(rng), dist(rng));
            DensityMatrix rho = 0.5 * (m + m.adjoint());
            rho /= rho.cwiseAbs().maxCoeff();
            NodeCoeffs c;
            c.c1 = 1.1;
            c.c2 = 0.3;
            c.c3 = 0.2;
            c.C = cplx(0.05, -0.1);
            c.D = -std::conj(c.C);
            c.omega0 = w0;
            worst = std::max(worst,
                             std::abs(liouville_apply(ScenarioKind::driven_cavity, c, rho,
                                                      cavity_ops)
                                          .trace()));
            DensityMatrix rho2 = rho.topLeftCorner(2, 2);
            rho2 = 0.5 * (rho2 + rho2.adjoint()).eval();
            worst = std::max(
                worst, std::abs(liouville_apply(ScenarioKind::two_state, c, rho2, spin_ops).trace()));
        }
        note(4, worst <= 1e-12, "generator trace leak " + std::to_string(worst));
        note(4, max_structural_trace_drift <= 1e-8,
             "trace drift " + std::to_string(max_structural_trace_drift));
        note(4, max_structural_herm_defect <= 1e-8,
             "hermiticity defect " + std::to_string(max_structural_herm_defect));
        std::snprintf(buf, sizeof buf,
                      "trace leak %.1e, drift %.1e, herm defect %.1e, D = -conj(C) exact", worst,
                      max_structural_trace_drift, max_structural_herm_defect);
        if (results[4].passed) results[4].detail = buf;
    }

    static const char* names[9] = {
        "",
        "route equivalence A_j = B_j on the reference scenario",
        "two-state decay identity rho_ee = |u|^2",
        "exponential-kernel closed form for u",
        "structural invariants (trace, hermiticity, tracelessness, D = -conj C)",
        "zero-coupling limits",
        "Monte Carlo consistency of the unraveling",
        "translation invariance of x21",
        "integral route scales worse than the propagator route",
    };
    int failures = 0;
    for (int k = 1; k <= 8; ++k) {
        std::printf("%s criterion %d: %s (%s)\n", results[k].passed ? "PASS" : "FAIL", k, names[k],
                    results[k].detail.c_str());
        if (!results[k].passed) ++failures;
    }
    return failures;
}

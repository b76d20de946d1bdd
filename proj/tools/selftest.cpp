#include <cmath>
#include <iostream>

#include "nmme/assemble.hpp"
#include "nmme/coefffuncs.hpp"
#include "nmme/green.hpp"
#include "nmme/unravel.hpp"
#include "runner.hpp"

namespace nmme::cli {

namespace {

int checks_failed = 0;

void check(bool ok, const std::string& name) {
    std::cout << (ok ? "PASS" : "FAIL") << " " << name << "\n";
    if (!ok) ++checks_failed;
}

}  // namespace

// Fast built-in battery; exercises one slice of every pipeline stage.
int run_selftest() {
    checks_failed = 0;
    const double w0 = 1.0;

    {
        const TimeGrid grid(0.05, 40);
        const ResponseKernel null = sample_kernels(NullBath{}, Temperature::inverse(1.0), grid);
        const TwoVarTable x11 = solve_x11(null, w0, grid);
        double gap = 0.0;
        for (int i = 0; i <= grid.n; ++i)
            for (int j = 0; j <= i; ++j)
                gap = std::max(gap, std::abs(x11.at(i, j) -
                                             std::exp(cplx(0.0, -w0 * (grid.node(i) - grid.node(j))))));
        check(gap < 1e-12, "null-kernel x11 is the bare phase");

        const OneVarTable x21 = solve_x21(null, w0, grid);
        const TwoVarTable x12 = solve_x12(null, w0, grid, x21);
        const CoeffSeries a = assemble_A(null, x11, x21, compute_y(x11, x12), w0);
        double amax = 0.0;
        for (int k = 0; k <= grid.n; ++k)
            amax = std::max({amax, std::abs(a.c1[k] - w0), std::abs(a.c2[k]), std::abs(a.c3[k])});
        check(amax < 1e-12, "null-kernel coefficients reduce to (w0, 0, 0)");
    }

    {
        const TimeGrid grid(0.1, 32);
        const ResponseKernel kernel =
            sample_kernels(OhmicExp{0.05, 5.0}, Temperature::inverse(1.0), grid);
        const double disc = verify_x21_translation_invariance(kernel, w0, grid);
        check(disc <= 10.0 * grid.h * grid.h, "x21 translation invariance on a small grid");
    }

    {
        Scenario sc;
        sc.kind = ScenarioKind::driven_cavity;
        sc.omega0 = w0;
        sc.bath = OhmicExp{0.05, 5.0};
        sc.temperature = Temperature::inverse(1.0);
        sc.n_max = 14;
        sc.initial = CoherentState{cplx(0.4, 0.0)};
        sc.drive = Drive(ConstantDrive{0.1});
        const TimeGrid grid(0.02, 100);
        const ResponseKernel kernel = sample_kernels(sc.bath, sc.temperature, grid);
        const CavityTables tables = solve_cavity_tables(kernel, w0, grid, {}, &*sc.drive);
        const CoeffSeries cd = assemble_CD(kernel, *tables.x13, *sc.drive);
        bool exact = true;
        for (int k = 0; k <= grid.n; ++k)
            exact = exact && cd.D[k] == -std::conj(cd.C[k]);
        check(exact, "driven coefficients satisfy D = -conj(C) exactly");

        const CoeffSeries a = assemble_A(kernel, tables.x11, tables.x21, tables.y, w0);
        const Trajectory traj = propagate(sc, a, &cd);
        check(traj.max_trace_drift < 1e-8 && traj.max_hermiticity_defect < 1e-8,
              "driven propagation preserves trace and hermiticity");
    }

    {
        Scenario sc;
        sc.kind = ScenarioKind::two_state;
        sc.omega0 = w0;
        sc.bath = LorentzianExtended{0.2, 1.0, w0};
        sc.temperature = Temperature::zero();
        sc.initial = ExcitedState{};
        const TimeGrid grid(0.05, 128);
        const ResponseKernel kernel = sample_kernels(sc.bath, sc.temperature, grid);
        const TwoVarTable x = solve_x_tsa(kernel, w0, grid);
        const CoeffSeries rs = assemble_RS(kernel, x);
        const Trajectory traj = propagate(sc, rs);

        const ResponseKernel fine =
            sample_kernels(sc.bath, sc.temperature, refined(grid)).conjugated();
        const auto u = solve_u(fine, w0, grid);
        double gap = 0.0;
        for (std::size_t s = 0; s < traj.t.size(); ++s) {
            const double expected = std::norm(u[2 * s]);
            gap = std::max(gap, std::abs(traj.samples[s].n_or_pe - expected));
        }
        check(gap < 1e-3, "two-state decay follows |u|^2");
    }

    {
        Scenario sc;
        sc.kind = ScenarioKind::cavity;
        sc.omega0 = w0;
        sc.bath = NullBath{};
        sc.temperature = Temperature::zero();
        sc.n_max = 3;
        sc.initial = FockState{1};
        const TimeGrid grid(0.02, 50);
        const EnsembleResult ens = run_ensemble(sc, grid, 400, 7);
        bool ok = ens.n_used == 400;
        for (std::size_t k = 0; k < ens.t.size(); ++k)
            ok = ok && std::abs(ens.mean_trace[k] - 1.0) <= 3.01 * ens.stderr_trace[k] + 1e-12;
        check(ok, "ensemble mean trace stays within three standard errors of 1");
    }

    std::cout << (checks_failed == 0 ? "selftest passed" : "selftest FAILED") << "\n";
    return checks_failed == 0 ? 0 : 1;
}

}  // namespace nmme::cli

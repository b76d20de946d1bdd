#include <doctest.h>

#include "nmme/assemble.hpp"
#include "nmme/coefffuncs.hpp"
#include "nmme/errors.hpp"
#include "nmme/unravel.hpp"

using namespace nmme;

namespace {

const double w0 = 1.0;

Scenario two_state_scenario(double gamma0 = 0.2) {
    Scenario sc;
    sc.kind = ScenarioKind::two_state;
    sc.omega0 = w0;
    sc.bath = LorentzianExtended{gamma0, 1.0, w0};
    sc.temperature = Temperature::zero();
    sc.initial = ExcitedState{};
    return sc;
}

}  // namespace

TEST_CASE("noise paths carry the designed variance") {
    const TimeGrid grid(0.05, 100);
    double mean = 0.0, var = 0.0;
    long count = 0;
    for (std::uint64_t traj = 0; traj < 20; ++traj) {
        const NoisePath path = sample_noise(grid, 11, traj);
        for (const auto& channel : path.nu)
            for (const auto& comp : channel)
                for (double v : comp) {
                    mean += v;
                    var += v * v;
                    ++count;
                }
    }
    mean /= count;
    var = var / count - mean * mean;
    CHECK(count == 20 * 8 * 100);
    CHECK(std::abs(mean) < 3.0 * std::sqrt(1.0 / grid.h / count));
    CHECK(var == doctest::Approx(1.0 / grid.h).epsilon(0.05));
}

TEST_CASE("colored fields vanish for a null kernel and start at zero") {
    const TimeGrid grid(0.05, 40);
    const ResponseKernel kernel = sample_kernels(NullBath{}, Temperature::inverse(1.0), grid);
    const NoisePath noise = sample_noise(grid, 3, 0);
    const auto [g1, g2] = sample_gbar(kernel, noise);
    for (const cplx& v : g1) CHECK(v == cplx(0.0, 0.0));
    for (const cplx& v : g2) CHECK(v == cplx(0.0, 0.0));

    const ResponseKernel ohmic = sample_kernels(OhmicExp{0.1, 5.0}, Temperature::inverse(1.0), grid);
    const auto [h1, h2] = sample_gbar(ohmic, noise);
    CHECK(h1[0] == cplx(0.0, 0.0));
    CHECK(h2[0] == cplx(0.0, 0.0));
}

TEST_CASE("field-noise covariance matches the direct-summation filter values") {
    const TimeGrid grid(0.1, 30);
    const ResponseKernel kernel = sample_kernels(OhmicExp{0.1, 5.0}, Temperature::inverse(1.0), grid);
    const long paths = 10000;
    const int j = 20, jp = 12;  // E[g1(t_j) nu_22(t_jp)] = (i/2) a1(t_{j-jp})
    cplx acc(0.0, 0.0);
    double second = 0.0;
    for (long p = 0; p < paths; ++p) {
        const NoisePath noise = sample_noise(grid, 99, std::uint64_t(p));
        const auto [g1, g2] = sample_gbar(kernel, noise);
        const cplx prod = g1[j] * noise.nu[1][1][jp];
        acc += prod;
        second += std::norm(prod);
    }
    const cplx estimate = acc / double(paths);
    const cplx expected = cplx(0.0, 0.5) * kernel.a1[j - jp];
    const double se = std::sqrt(second / paths / paths);  // crude per-component bound
    CHECK(std::abs(estimate - expected) < 3.0 * se);
}

TEST_CASE("a noiseless step is one explicit Euler von Neumann step") {
    const LadderOps ops(4);
    DensityMatrix rho = DensityMatrix::Zero(4, 4);
    rho(1, 1) = 0.5;
    rho(0, 0) = 0.5;
    rho(1, 0) = cplx(0.2, 0.1);
    rho(0, 1) = std::conj(rho(1, 0));
    const std::array<std::array<double, 4>, 2> quiet{};
    const double h = 0.01;
    const DensityMatrix next =
        step_sde(ScenarioKind::cavity, rho, w0, cplx(0, 0), cplx(0, 0), quiet, h, ops);
    const Eigen::MatrixXcd hmat = w0 * ops.number;
    const DensityMatrix expected = rho - cplx(0.0, h) * (hmat * rho - rho * hmat);
    CHECK((next - expected).cwiseAbs().maxCoeff() < 1e-16);
}

TEST_CASE("the trace increment is a martingale") {
    const TimeGrid grid(0.05, 2);
    const LadderOps ops(3);
    DensityMatrix rho = DensityMatrix::Zero(3, 3);
    rho(0, 0) = 0.4;
    rho(1, 1) = 0.6;
    rho(1, 0) = cplx(0.3, -0.1);
    rho(0, 1) = std::conj(rho(1, 0));
    const long steps = 100000;
    double sum = 0.0, sumsq = 0.0;
    for (long k = 0; k < steps; ++k) {
        const NoisePath noise = sample_noise(grid, 5, std::uint64_t(k));
        std::array<std::array<double, 4>, 2> nu;
        for (int c = 0; c < 2; ++c)
            for (int n = 0; n < 4; ++n) nu[c][n] = noise.nu[c][n][0];
        const DensityMatrix next = step_sde(ScenarioKind::cavity, rho, w0, cplx(0.1, 0.05),
                                            cplx(-0.02, 0.07), nu, grid.h, ops);
        const double tr = next.trace().real();
        sum += tr;
        sumsq += tr * tr;
    }
    const double mean = sum / steps;
    const double se = std::sqrt((sumsq / steps - mean * mean) / steps);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
}

TEST_CASE("dropping the decoupled noise channels leaves the mean unchanged") {
    Scenario sc = two_state_scenario();
    const TimeGrid grid(0.02, 100);
    const EnsembleResult full = run_ensemble(sc, grid, 8000, 21, NoiseChannelSet::full);
    const EnsembleResult reduced = run_ensemble(sc, grid, 8000, 22, NoiseChannelSet::decay_only);
    REQUIRE(full.t.size() == reduced.t.size());
    for (std::size_t s = 0; s < full.t.size(); ++s) {
        const double se =
            std::sqrt(full.stderr_obs[s] * full.stderr_obs[s] +
                      reduced.stderr_obs[s] * reduced.stderr_obs[s]);
        CHECK(std::abs(full.mean_obs[s] - reduced.mean_obs[s]) <= 3.0 * se + 1e-12);
    }
}

TEST_CASE("ensemble means stay consistent with the deterministic route") {
    Scenario sc = two_state_scenario();
    const TimeGrid grid = TimeGrid::from_horizon(2.0, 100);
    const ResponseKernel kernel = sample_kernels(sc.bath, sc.temperature, grid);
    const CoeffSeries rs = assemble_RS(kernel, solve_x_tsa(kernel, w0, grid));
    const Trajectory det = propagate(sc, rs);

    const EnsembleResult ens = run_ensemble(sc, grid, 4000, 17);
    REQUIRE(ens.t.size() == det.t.size());
    CHECK(ens.n_used == 4000);
    for (std::size_t s = 0; s < ens.t.size(); ++s) {
        CHECK(std::abs(ens.mean_obs[s] - det.samples[s].n_or_pe) <=
              3.0 * ens.stderr_obs[s] + 1e-12);
        CHECK(std::abs(ens.mean_trace[s] - 1.0) <= 3.0 * ens.stderr_trace[s] + 1e-12);
    }
}

TEST_CASE("results are bit-identical across thread counts") {
    Scenario sc = two_state_scenario();
    const TimeGrid grid(0.02, 50);
    const EnsembleResult a = run_ensemble(sc, grid, 500, 123, NoiseChannelSet::full, 1);
    const EnsembleResult b = run_ensemble(sc, grid, 500, 123, NoiseChannelSet::full, 3);
    CHECK(a.mean_obs == b.mean_obs);
    CHECK(a.stderr_obs == b.stderr_obs);
    CHECK(a.mean_trace == b.mean_trace);
    CHECK(a.stderr_trace == b.stderr_trace);
}

TEST_CASE("pathological ensembles fail loudly") {
    Scenario sc = two_state_scenario(400.0);  // coupling far beyond the step budget
    const TimeGrid grid(0.5, 40);
    CHECK_THROWS_AS(run_ensemble(sc, grid, 200, 9), SolverError);
    CHECK_THROWS_AS(run_ensemble(sc, grid, 50, 9), std::invalid_argument);  // too few paths
}

// unravel.hpp — Monte Carlo integration of the stochastic Liouville equation
//
// Each trajectory propagates a random density matrix driven by bath-induced
// colored fields (built by filtering white noise through the response
// kernels) plus multiplicative white-noise terms. Individual trajectories are
// neither Hermitian nor normalized; the ensemble mean recovers the reduced
// density matrix. Euler-Maruyama stepping in Ito convention, step = grid h.

#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "nmme/dynamics.hpp"
#include "nmme/grid.hpp"
#include "nmme/kernels.hpp"

namespace nmme {

// Discrete white noise: nu[k][n][j], channel k in {0,1}, component n in
// 0..3, step j in 0..N-1, each sample i.i.d. Normal(0, 1/h).
struct NoisePath {
    TimeGrid grid;
    std::array<std::array<std::vector<double>, 4>, 2> nu;
};

// Deterministic per-trajectory stream: the draw sequence depends only on
// (seed, trajectory index), never on thread scheduling.
NoisePath sample_noise(const TimeGrid& grid, std::uint64_t seed, std::uint64_t trajectory);

// Bath-induced fields at the grid nodes (left-rectangle Ito convolution of
// the white noises against the kernels); gbar(0) = 0.
std::pair<std::vector<cplx>, std::vector<cplx>> sample_gbar(const ResponseKernel& kernel,
                                                            const NoisePath& noise);

// At zero temperature for the two-state atom, two of the four complex noise
// combinations decouple from the mean dynamics and may be dropped.
enum class NoiseChannelSet { full, decay_only };

// One Euler-Maruyama step from node j. nu_at_node points at the 8 components
// nu[k][n][j]; f1, f2 are (a, adag) or (sm, sp).
DensityMatrix step_sde(ScenarioKind kind, const DensityMatrix& rho, double omega0,
                       const cplx& gbar1, const cplx& gbar2,
                       const std::array<std::array<double, 4>, 2>& nu_at_node, double h,
                       const LadderOps& ops, NoiseChannelSet channels = NoiseChannelSet::full);

struct EnsembleResult {
    std::vector<double> t;  // every second node, matching the deterministic sampling
    std::vector<double> mean_obs, stderr_obs;      // <a^dag a> or rho_ee
    std::vector<double> mean_trace, stderr_trace;  // real part of tr(rho)
    long n_used{0};
    long n_excluded{0};
    std::uint64_t seed{0};
};

// Averages n_traj trajectories; per-trajectory RNG streams are derived from
// (seed, index) and accumulation is pairwise over indices, so the result is
// bit-identical for any thread count. Trajectories that overflow are
// excluded; more than 1% exclusions fails the run.
EnsembleResult run_ensemble(const Scenario& scenario, const TimeGrid& grid, long n_traj,
                            std::uint64_t seed, NoiseChannelSet channels = NoiseChannelSet::full,
                            int threads = 0);

}  // namespace nmme

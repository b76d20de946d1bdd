#include "nmme/unravel.hpp"

#include <cmath>

#include "nmme/errors.hpp"
#include "nmme/parallel.hpp"

namespace nmme {

namespace {

constexpr double kOverflowThreshold = 1e6;
constexpr double kExclusionBudget = 0.01;

// splitmix64 finalizer (pure avalanche)
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix64(std::uint64_t& state) {
    return mix64(state += 0x9e3779b97f4a7c15ULL);
}

// Deterministic normal generator: fully pinned Box-Muller on top of
// splitmix64 so ensembles reproduce bit-exactly for a fixed seed. The stream
// state is an avalanche hash of (seed, stream index); hashing breaks the
// additive lattice of raw splitmix states, which would otherwise make nearby
// trajectories consume shifted copies of one underlying sequence.
struct NormalStream {
    std::uint64_t state;
    bool have_spare = false;
    double spare = 0.0;

    explicit NormalStream(std::uint64_t seed, std::uint64_t stream) {
        state = mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + stream);
    }

    double uniform() {  // in (0, 1]
        return (double(splitmix64(state) >> 11) + 1.0) * 0x1p-53;
    }

    double normal() {
        if (have_spare) {
            have_spare = false;
            return spare;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare = r * std::sin(a);
        have_spare = true;
        return r * std::cos(a);
    }
};

bool finite(const DensityMatrix& rho) {
    return rho.allFinite() && rho.cwiseAbs().maxCoeff() < kOverflowThreshold;
}

// Pairwise (order-insensitive) reduction of value and value^2 over [lo, hi).
struct Moments {
    double sum = 0.0;
    double sumsq = 0.0;
};
Moments pairwise_moments(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
    if (hi - lo <= 64) {
        Moments m;
        for (std::size_t k = lo; k < hi; ++k) {
            m.sum += v[k];
            m.sumsq += v[k] * v[k];
        }
        return m;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    const Moments a = pairwise_moments(v, lo, mid);
    const Moments b = pairwise_moments(v, mid, hi);
    return {a.sum + b.sum, a.sumsq + b.sumsq};
}

}  // namespace

NoisePath sample_noise(const TimeGrid& grid, std::uint64_t seed, std::uint64_t trajectory) {
    grid.validate();
    NoisePath path;
    path.grid = grid;
    NormalStream rng(seed, trajectory);
    const double scale = 1.0 / std::sqrt(grid.h);  // variance 1/h renders the delta correlation
    for (auto& channel : path.nu)
        for (auto& component : channel) {
            component.resize(grid.n);
            for (int j = 0; j < grid.n; ++j) component[j] = scale * rng.normal();
        }
    return path;
}

std::pair<std::vector<cplx>, std::vector<cplx>> sample_gbar(const ResponseKernel& kernel,
                                                            const NoisePath& noise) {
    require_same_grid(kernel.grid, noise.grid, "sample_gbar");
    const int n = kernel.grid.n;
    const double h = kernel.grid.h;
    std::vector<cplx> g1(n + 1, cplx(0.0, 0.0)), g2(n + 1, cplx(0.0, 0.0));

    const auto& nu1 = noise.nu[0];  // channel k = 1 components nu_{n1}
    const auto& nu2 = noise.nu[1];  // channel k = 2 components nu_{n2}
    const cplx ihalf(0.0, 0.5);
    for (int j = 1; j <= n; ++j) {
        cplx acc1(0.0, 0.0), acc2(0.0, 0.0);
        for (int jp = 0; jp < j; ++jp) {
            const int d = j - jp;
            acc1 += kernel.a1[d] * cplx(nu2[1][jp], nu2[2][jp]) -
                    kernel.a2[d] * cplx(nu2[3][jp], nu2[0][jp]);
            acc2 += std::conj(kernel.a1[d]) * cplx(nu1[1][jp], nu1[2][jp]) +
                    std::conj(kernel.a2[d]) * cplx(nu1[3][jp], nu1[0][jp]);
        }
        g1[j] = ihalf * h * acc1;
        g2[j] = -ihalf * h * acc2;
    }
    return {std::move(g1), std::move(g2)};
}

DensityMatrix step_sde(ScenarioKind kind, const DensityMatrix& rho, double omega0,
                       const cplx& gbar1, const cplx& gbar2,
                       const std::array<std::array<double, 4>, 2>& nu, double h,
                       const LadderOps& ops, NoiseChannelSet channels) {
    const int d = int(rho.rows());
    const bool two_state = kind == ScenarioKind::two_state;
    if (two_state && d != 2) throw std::invalid_argument("step_sde: two-state state must be 2x2");
    if (channels == NoiseChannelSet::decay_only && !two_state)
        throw std::invalid_argument("step_sde: decay_only applies to the two-state path");

    // f1 = a (or sm), f2 = adag (or sp); for d = 2 the ladder ops specialise
    // to exactly the spin pair
    const Eigen::MatrixXcd& f1 = ops.a;
    const Eigen::MatrixXcd& f2 = ops.adag;

    // H = H_s + gbar1 f1 + gbar2 f2; two-state H_s = -(omega0/2) sigma_z
    Eigen::MatrixXcd heff;
    if (two_state) {
        heff = Eigen::MatrixXcd::Zero(2, 2);
        heff(0, 0) = 0.5 * omega0;
        heff(1, 1) = -0.5 * omega0;
    } else {
        heff = omega0 * ops.number;
    }
    heff.noalias() += gbar1 * f1 + gbar2 * f2;

    // i drho = [H, rho] dt + (1/2) sum_k [f_k, rho] dW1k + (i/2) sum_k {f_k, rho} conj(dW2k)
    Eigen::MatrixXcd increment = h * (heff * rho - rho * heff);

    if (channels == NoiseChannelSet::full) {
        const cplx dw11 = cplx(nu[0][0], nu[0][3]) * h;
        const cplx dw21c = cplx(nu[0][1], -nu[0][2]) * h;
        const cplx dw12 = cplx(nu[1][0], nu[1][3]) * h;
        const cplx dw22c = cplx(nu[1][1], -nu[1][2]) * h;
        const cplx ih(0.0, 0.5);
        increment += 0.5 * dw11 * (f1 * rho - rho * f1) + ih * dw21c * (f1 * rho + rho * f1);
        increment += 0.5 * dw12 * (f2 * rho - rho * f2) + ih * dw22c * (f2 * rho + rho * f2);
    } else {
        // rewrite the four channels in the eta basis and keep only the two
        // combinations that stay correlated with the colored fields:
        // i drho += (i h / 2)(conj(eta11) f1 rho + conj(eta22) rho f2)
        const cplx eta11c = cplx(nu[0][1] + nu[0][3], -(nu[0][2] + nu[0][0]));
        const cplx eta22c = cplx(nu[1][1] - nu[1][3], nu[1][0] - nu[1][2]);
        const cplx ih2(0.0, 0.5 * h);
        increment += ih2 * (eta11c * (f1 * rho) + eta22c * (rho * f2));
    }

    return rho - cplx(0.0, 1.0) * increment;  // divide i drho by i
}

EnsembleResult run_ensemble(const Scenario& scenario, const TimeGrid& grid, long n_traj,
                            std::uint64_t seed, NoiseChannelSet channels, int threads) {
    scenario.validate();
    grid.validate();
    if (n_traj < 100) throw std::invalid_argument("run_ensemble: need at least 100 trajectories");
    if (scenario.kind == ScenarioKind::driven_cavity)
        throw std::invalid_argument("run_ensemble: the driven cavity has no unraveling here");
    if (channels == NoiseChannelSet::decay_only &&
        (scenario.kind != ScenarioKind::two_state || !scenario.temperature.is_zero()))
        throw std::invalid_argument("run_ensemble: decay_only needs the zero-T two-state path");

    const ResponseKernel kernel = sample_kernels(scenario.bath, scenario.temperature, grid);
    const LadderOps ops(scenario.dim());
    const DensityMatrix rho0 = scenario.initial_density();
    const int n_samples = grid.n / 2 + 1;

    // per-trajectory observable series, filled by index then reduced pairwise
    std::vector<std::vector<double>> obs(n_samples), trace(n_samples);
    for (auto& v : obs) v.assign(n_traj, 0.0);
    for (auto& v : trace) v.assign(n_traj, 0.0);
    std::vector<std::uint8_t> excluded(n_traj, 0);

    parallel_for(n_traj, threads, [&](long idx) {
        const NoisePath noise = sample_noise(grid, seed, std::uint64_t(idx));
        const auto [g1, g2] = sample_gbar(kernel, noise);
        DensityMatrix rho = rho0;
        int sample = 0;
        auto record = [&](int node) {
            if (node % 2 != 0) return;
            const auto rec = observables(rho, scenario.kind);
            obs[sample][idx] = rec.n_or_pe;
            trace[sample][idx] = rec.trace;
            ++sample;
        };
        record(0);
        for (int j = 0; j < grid.n; ++j) {
            std::array<std::array<double, 4>, 2> nu;
            for (int k = 0; k < 2; ++k)
                for (int c = 0; c < 4; ++c) nu[k][c] = noise.nu[k][c][j];
            rho = step_sde(scenario.kind, rho, scenario.omega0, g1[j], g2[j], nu, grid.h, ops,
                           channels);
            if (!finite(rho)) {
                excluded[idx] = 1;
                return;
            }
            record(j + 1);
        }
    });

    EnsembleResult out;
    out.seed = seed;
    for (long idx = 0; idx < n_traj; ++idx) out.n_excluded += excluded[idx];
    out.n_used = n_traj - out.n_excluded;
    if (out.n_excluded > kExclusionBudget * double(n_traj))
        throw SolverError("unravel: more than 1% of trajectories overflowed (" +
                          std::to_string(out.n_excluded) + " of " + std::to_string(n_traj) + ")");

    // compact excluded trajectories out, preserving index order
    auto compact = [&](std::vector<double>& v) {
        if (out.n_excluded == 0) return;
        std::size_t w = 0;
        for (long idx = 0; idx < n_traj; ++idx)
            if (!excluded[idx]) v[w++] = v[idx];
        v.resize(w);
    };

    const long n = out.n_used;
    out.t.resize(n_samples);
    out.mean_obs.resize(n_samples);
    out.stderr_obs.resize(n_samples);
    out.mean_trace.resize(n_samples);
    out.stderr_trace.resize(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        out.t[s] = grid.node(2 * s);
        compact(obs[s]);
        compact(trace[s]);
        const Moments mo = pairwise_moments(obs[s], 0, obs[s].size());
        const Moments mt = pairwise_moments(trace[s], 0, trace[s].size());
        out.mean_obs[s] = mo.sum / n;
        out.mean_trace[s] = mt.sum / n;
        auto stderr_of = [n](const Moments& m, double mean) {
            if (n < 2) return 0.0;
            const double var = std::max(0.0, (m.sumsq - n * mean * mean) / (n - 1));
            return std::sqrt(var / n);
        };
        out.stderr_obs[s] = stderr_of(mo, out.mean_obs[s]);
        out.stderr_trace[s] = stderr_of(mt, out.mean_trace[s]);
    }
    return out;
}

}  // namespace nmme

// dynamics.hpp — reduced-density-matrix propagation under the time-local
// master equations (cavity, driven cavity, two-state atom)

#pragma once

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "nmme/coeffs.hpp"
#include "nmme/drive.hpp"
#include "nmme/grid.hpp"
#include "nmme/spectral.hpp"

namespace nmme {

using DensityMatrix = Eigen::MatrixXcd;

enum class ScenarioKind { cavity, driven_cavity, two_state };

struct FockState {
    int n{0};
};
struct CoherentState {
    cplx alpha{0.0, 0.0};
};
struct ExcitedState {};
struct GroundState {};
struct BlochState {  // cos(theta/2)|e> + e^{i phi} sin(theta/2)|g>
    double theta{0.0};
    double phi{0.0};
};
using InitialState = std::variant<FockState, CoherentState, ExcitedState, GroundState, BlochState>;

struct Scenario {
    ScenarioKind kind{ScenarioKind::cavity};
    double omega0{1.0};
    SpectralModel bath{NullBath{}};
    Temperature temperature{Temperature::zero()};
    int n_max{0};  // cavity kinds; dimension n_max + 1
    InitialState initial{FockState{0}};
    std::optional<Drive> drive;  // driven_cavity only

    int dim() const { return kind == ScenarioKind::two_state ? 2 : n_max + 1; }
    bool is_cavity_like() const { return kind != ScenarioKind::two_state; }
    void validate() const;
    DensityMatrix initial_density() const;
};

// Truncated ladder operators; a drops the coupling out of the top level, so
// adag = a^T keeps adag|n_max> = 0.
struct LadderOps {
    Eigen::MatrixXcd a, adag, number, a_adag;
    explicit LadderOps(int dim);
};

// Per-node coefficient values consumed by the generator.
struct NodeCoeffs {
    double c1{0.0}, c2{0.0}, c3{0.0};  // A1..A3 (cavity) or R, S (two-state)
    cplx C{0.0, 0.0}, D{0.0, 0.0};     // driven terms
    double omega0{0.0};                // bare frequency; two-state H_s only
};

// Right-hand side of the selected master equation, written exactly as the
// time-local generator dictates; traceless and Hermiticity-preserving for
// real c-coefficients and D = -conj(C).
DensityMatrix liouville_apply(ScenarioKind kind, const NodeCoeffs& coeffs, const DensityMatrix& rho,
                              const LadderOps& ops);

struct ObservableRecord {
    double trace{0.0};
    double purity{0.0};
    double n_or_pe{0.0};  // photon number or excited-state population
    cplx coherence{0.0, 0.0};  // <a> or rho_eg
};
ObservableRecord observables(const DensityMatrix& rho, ScenarioKind kind);

struct Trajectory {
    std::vector<double> t;  // one sample per propagation step (2h)
    std::vector<ObservableRecord> samples;
    double max_trace_drift{0.0};
    double max_hermiticity_defect{0.0};
    std::vector<DensityMatrix> snapshots;  // filled on request
};

// Classic RK4 with step 2h; coefficients are read at nodes k, k+1, k+2 so no
// interpolation ever happens. Fails hard on truncation breach (top-level
// population > 1e-6) and on trace drift > 1e-6.
Trajectory propagate(const Scenario& scenario, const CoeffSeries& coeffs,
                     const CoeffSeries* driven_extra = nullptr, bool keep_snapshots = false);

}  // namespace nmme

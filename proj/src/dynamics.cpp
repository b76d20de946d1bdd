#include "nmme/dynamics.hpp"

#include <cmath>

#include "nmme/errors.hpp"

namespace nmme {

namespace {

constexpr double kTruncationBudget = 1e-6;
constexpr double kTraceDriftBudget = 1e-6;

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

void Scenario::validate() const {
    nmme::validate(bath);
    if (!std::isfinite(omega0)) throw std::invalid_argument("Scenario: omega0 must be finite");
    if (kind == ScenarioKind::two_state) {
        if (!temperature.is_zero())
            throw std::invalid_argument("Scenario: the two-state path requires zero temperature");
        if (!std::holds_alternative<ExcitedState>(initial) &&
            !std::holds_alternative<GroundState>(initial) &&
            !std::holds_alternative<BlochState>(initial))
            throw std::invalid_argument("Scenario: two-state initial state must be excited/ground/bloch");
    } else {
        if (n_max < 2) throw std::invalid_argument("Scenario: cavity kinds need n_max >= 2");
        if (n_max > 120) throw std::invalid_argument("Scenario: n_max too large for stable amplitudes");
        if (const auto* f = std::get_if<FockState>(&initial)) {
            if (f->n < 0 || f->n > n_max)
                throw std::invalid_argument("Scenario: fock level outside the truncated basis");
        } else if (const auto* c = std::get_if<CoherentState>(&initial)) {
            if (std::norm(c->alpha) > 0.25 * n_max)
                throw std::invalid_argument("Scenario: coherent amplitude needs |alpha|^2 <= n_max/4");
        } else {
            throw std::invalid_argument("Scenario: cavity initial state must be fock or coherent");
        }
    }
    if (kind == ScenarioKind::driven_cavity && !drive)
        throw std::invalid_argument("Scenario: driven cavity needs a drive");
    if (kind != ScenarioKind::driven_cavity && drive)
        throw std::invalid_argument("Scenario: drive given but the scenario is not driven");
}

DensityMatrix Scenario::initial_density() const {
    const int d = dim();
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(d);
    std::visit(
        [&](const auto& st) {
            using S = std::decay_t<decltype(st)>;
            if constexpr (std::is_same_v<S, FockState>) {
                psi[st.n] = 1.0;
            } else if constexpr (std::is_same_v<S, CoherentState>) {
                // c_n = e^{-|a|^2/2} a^n / sqrt(n!), truncated
                const double norm = std::exp(-0.5 * std::norm(st.alpha));
                cplx amp(norm, 0.0);
                for (int n = 0; n < d; ++n) {
                    psi[n] = amp / std::sqrt(factorial(n));
                    amp *= st.alpha;
                }
            } else if constexpr (std::is_same_v<S, ExcitedState>) {
                psi[1] = 1.0;
            } else if constexpr (std::is_same_v<S, GroundState>) {
                psi[0] = 1.0;
            } else {
                psi[1] = std::cos(0.5 * st.theta);
                psi[0] = std::exp(cplx(0.0, st.phi)) * std::sin(0.5 * st.theta);
            }
        },
        initial);
    return psi * psi.adjoint();
}

LadderOps::LadderOps(int dim) {
    a = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    adag = a.transpose();
    number = adag * a;
    a_adag = a * adag;
}

DensityMatrix liouville_apply(ScenarioKind kind, const NodeCoeffs& coeffs, const DensityMatrix& rho,
                              const LadderOps& ops) {
    if (rho.rows() != rho.cols() || rho.rows() != ops.a.rows())
        throw std::invalid_argument("liouville_apply: dimension mismatch");

    if (kind == ScenarioKind::two_state) {
        // basis (g, e); sp = |e><g|, sm = |g><e|, sigma_z = diag(-1, +1),
        // H_s = -(omega0/2) sigma_z. The frequency shift S stays a separate
        // commutator term; it is not folded into a renormalized omega0.
        const double r = coeffs.c1, s = coeffs.c2;
        const double hg = 0.5 * coeffs.omega0;           // (g, g) of H_s + (S/2) sp sm
        const double he = -0.5 * coeffs.omega0 + 0.5 * s;  // (e, e)
        DensityMatrix out = DensityMatrix::Zero(2, 2);
        const cplx mi(0.0, -1.0);
        out(0, 1) = mi * (hg - he) * rho(0, 1);
        out(1, 0) = mi * (he - hg) * rho(1, 0);
        // R (sm rho sp - 1/2 {sp sm, rho})
        out(0, 0) += r * rho(1, 1);
        out(1, 1) -= r * rho(1, 1);
        out(0, 1) -= 0.5 * r * rho(0, 1);
        out(1, 0) -= 0.5 * r * rho(1, 0);
        return out;
    }

    // cavity family; the undriven equation is the C = D = 0 case of the same
    // expression, so both kinds run identical arithmetic
    DensityMatrix m = cplx(0.0, -coeffs.c1) * ops.number;
    if (kind == ScenarioKind::driven_cavity) m += coeffs.C * ops.a + coeffs.D * ops.adag;
    DensityMatrix out = m * rho - rho * m;
    out.noalias() += coeffs.c2 * (2.0 * ops.a * rho * ops.adag - ops.number * rho - rho * ops.number);
    out.noalias() += coeffs.c3 * (ops.adag * rho * ops.a + ops.a * rho * ops.adag -
                                  ops.number * rho - rho * ops.a_adag);
    return out;
}

ObservableRecord observables(const DensityMatrix& rho, ScenarioKind kind) {
    ObservableRecord rec;
    rec.trace = rho.trace().real();
    rec.purity = (rho * rho).trace().real();
    const int d = int(rho.rows());
    if (kind == ScenarioKind::two_state) {
        rec.n_or_pe = rho(1, 1).real();
        rec.coherence = rho(1, 0);  // rho_eg
    } else {
        double n = 0.0;
        for (int k = 0; k < d; ++k) n += k * rho(k, k).real();
        rec.n_or_pe = n;
        cplx a(0.0, 0.0);  // tr(rho a) = sum sqrt(n) rho(n, n-1)
        for (int k = 1; k < d; ++k) a += std::sqrt(double(k)) * rho(k, k - 1);
        rec.coherence = a;
    }
    return rec;
}

namespace {

NodeCoeffs coeffs_at(const Scenario& scenario, const CoeffSeries& coeffs,
                     const CoeffSeries* extra, int node) {
    NodeCoeffs c;
    c.omega0 = scenario.omega0;
    c.c1 = coeffs.c1[node];
    c.c2 = coeffs.c2[node];
    if (scenario.kind != ScenarioKind::two_state) {
        c.c3 = coeffs.c3[node];
        if (extra) {
            c.C = extra->C[node];
            c.D = extra->D[node];
        }
    }
    return c;
}

}  // namespace

Trajectory propagate(const Scenario& scenario, const CoeffSeries& coeffs,
                     const CoeffSeries* driven_extra, bool keep_snapshots) {
    scenario.validate();
    const TimeGrid& grid = coeffs.grid;
    grid.validate();
    if (scenario.kind == ScenarioKind::two_state) {
        if (coeffs.kind != CoeffKind::two_state)
            throw std::invalid_argument("propagate: two-state scenario needs R/S coefficients");
    } else if (coeffs.kind != CoeffKind::cavity && coeffs.kind != CoeffKind::oracle) {
        throw std::invalid_argument("propagate: cavity scenario needs A (or B) coefficients");
    }
    if (scenario.kind == ScenarioKind::driven_cavity) {
        if (!driven_extra || driven_extra->kind != CoeffKind::driven_extra)
            throw std::invalid_argument("propagate: driven scenario needs C/D coefficients");
        require_same_grid(driven_extra->grid, grid, "propagate(driven_extra)");
    }

    const LadderOps ops(scenario.dim());
    DensityMatrix rho = scenario.initial_density();
    const double step = 2.0 * grid.h;

    Trajectory traj;
    traj.t.reserve(grid.n / 2 + 1);
    traj.samples.reserve(grid.n / 2 + 1);

    auto record = [&](int node) {
        traj.t.push_back(grid.node(node));
        traj.samples.push_back(observables(rho, scenario.kind));
        if (keep_snapshots) traj.snapshots.push_back(rho);

        const double drift = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
        traj.max_trace_drift = std::max(traj.max_trace_drift, drift);
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        traj.max_hermiticity_defect = std::max(traj.max_hermiticity_defect, herm);
        if (scenario.is_cavity_like()) {
            const double top = rho(scenario.n_max, scenario.n_max).real();
            if (top > kTruncationBudget)
                throw TruncationError(
                    "dynamics: top Fock level populated beyond 1e-6; increase n_max",
                    grid.node(node));
        }
        if (drift > kTraceDriftBudget)
            throw SolverError("dynamics: trace drift exceeded 1e-6 at t = " +
                              std::to_string(grid.node(node)) + "; refine the grid");
    };

    record(0);
    for (int k = 0; k + 2 <= grid.n; k += 2) {
        const NodeCoeffs c0 = coeffs_at(scenario, coeffs, driven_extra, k);
        const NodeCoeffs cm = coeffs_at(scenario, coeffs, driven_extra, k + 1);
        const NodeCoeffs c1 = coeffs_at(scenario, coeffs, driven_extra, k + 2);
        const DensityMatrix k1 = liouville_apply(scenario.kind, c0, rho, ops);
        const DensityMatrix k2 =
            liouville_apply(scenario.kind, cm, DensityMatrix(rho + 0.5 * step * k1), ops);
        const DensityMatrix k3 =
            liouville_apply(scenario.kind, cm, DensityMatrix(rho + 0.5 * step * k2), ops);
        const DensityMatrix k4 =
            liouville_apply(scenario.kind, c1, DensityMatrix(rho + step * k3), ops);
        rho += (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        record(k + 2);
    }
    return traj;
}

}  // namespace nmme

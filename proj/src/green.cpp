#include "nmme/green.hpp"

#include <cmath>

#include "nmme/errors.hpp"

namespace nmme {

namespace {

constexpr double kSingularityThreshold = 1e-8;

void require_half_step(const ResponseKernel& kernel, const TimeGrid& grid, const char* where) {
    grid.validate();
    if (kernel.grid.n != 2 * grid.n ||
        std::abs(kernel.grid.h - 0.5 * grid.h) > 1e-12 * grid.h)
        throw std::invalid_argument(std::string(where) +
                                    ": kernel must be sampled at half the grid step");
}

// History convolution \int_0^tau conj(a1)(tau - s) f(s) ds by composite
// trapezoid over the integer nodes below tau plus, at half-step stage times,
// a short closing panel. d counts half steps (tau = d h/2); fend is the
// integrand value at tau itself (the running RK4 stage estimate).
struct HistoryConv {
    const ResponseKernel& fine;
    double h;

    cplx operator()(int d, const std::vector<cplx>& f, cplx fend) const {
        const int k = d / 2;
        cplx acc(0.0, 0.0);
        if (d % 2 == 0) {
            if (k == 0) return acc;
            for (int j = 0; j < k; ++j)
                acc += ((j == 0) ? 0.5 : 1.0) * std::conj(fine.a1[d - 2 * j]) * f[j];
            acc += 0.5 * std::conj(fine.a1[0]) * fend;
            return h * acc;
        }
        for (int j = 0; j <= k; ++j) {
            const double w = (j == 0 || j == k) ? 0.5 : 1.0;  // trapezoid on [0, t_k]
            acc += w * std::conj(fine.a1[d - 2 * j]) * f[j];
        }
        acc *= h;
        if (k == 0) acc = cplx(0.0, 0.0);  // empty [0, t_0]
        acc += 0.25 * h * (std::conj(fine.a1[1]) * f[k] + std::conj(fine.a1[0]) * fend);
        return acc;
    }
};

// Thermal source of the v equation at tau = d h/2 for final index ifinal.
cplx v_source(const ResponseKernel& fine, const std::vector<cplx>& u, int ifinal, int d, double h) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j <= ifinal; ++j) {
        const double w = detail::trap_weight(j, 0, ifinal, h);
        if (w == 0.0) continue;
        const int off = d - 2 * j;  // negative offsets conjugate inside *_at
        acc += w * std::conj(fine.a2_at(off) - fine.a1_at(off)) * std::conj(u[ifinal - j]);
    }
    return 0.5 * acc;
}

}  // namespace

std::vector<cplx> solve_u(const ResponseKernel& fine, double omega0, const TimeGrid& grid) {
    require_half_step(fine, grid, "solve_u");
    const double h = grid.h;
    const cplx iw0(0.0, omega0);
    HistoryConv conv{fine, h};

    std::vector<cplx> u(grid.size());
    u[0] = cplx(1.0, 0.0);
    for (int k = 0; k < grid.n; ++k) {
        const cplx uk = u[k];
        auto rhs = [&](int d, cplx val) { return -iw0 * val - conv(d, u, val); };
        const cplx k1 = rhs(2 * k, uk);
        const cplx k2 = rhs(2 * k + 1, uk + 0.5 * h * k1);
        const cplx k3 = rhs(2 * k + 1, uk + 0.5 * h * k2);
        const cplx k4p = rhs(2 * k + 2, uk + h * k3);
        cplx next = uk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4p);
        const cplx k4c = rhs(2 * k + 2, next);  // corrector for the newest point
        next = uk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4c);
        if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
            throw SolverError("green: u overflowed at t = " + std::to_string(grid.node(k + 1)));
        u[k + 1] = next;
    }
    return u;
}

TwoVarTable solve_v(const ResponseKernel& fine, double omega0, const TimeGrid& grid,
                    const std::vector<cplx>& u) {
    require_half_step(fine, grid, "solve_v");
    if (int(u.size()) != grid.size()) throw std::invalid_argument("solve_v: u/grid size mismatch");
    const double h = grid.h;
    const cplx iw0(0.0, omega0);
    HistoryConv conv{fine, h};

    TwoVarTable v(grid);
    std::vector<cplx> row(grid.size());
    for (int ifinal = 0; ifinal <= grid.n; ++ifinal) {
        row[0] = cplx(0.0, 0.0);
        cplx src_lo = v_source(fine, u, ifinal, 0, h);
        for (int k = 0; k < ifinal; ++k) {
            const cplx vk = row[k];
            const cplx src_mid = v_source(fine, u, ifinal, 2 * k + 1, h);
            const cplx src_hi = v_source(fine, u, ifinal, 2 * k + 2, h);
            auto rhs = [&](int d, cplx val, cplx src) { return -iw0 * val - conv(d, row, val) + src; };
            const cplx k1 = rhs(2 * k, vk, src_lo);
            const cplx k2 = rhs(2 * k + 1, vk + 0.5 * h * k1, src_mid);
            const cplx k3 = rhs(2 * k + 1, vk + 0.5 * h * k2, src_mid);
            const cplx k4p = rhs(2 * k + 2, vk + h * k3, src_hi);
            cplx next = vk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4p);
            const cplx k4c = rhs(2 * k + 2, next, src_hi);
            next = vk + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4c);
            if (!std::isfinite(next.real()) || !std::isfinite(next.imag()))
                throw SolverError("green: v overflowed at t = " + std::to_string(grid.node(k + 1)));
            row[k + 1] = next;
            src_lo = src_hi;
        }
        auto out = v.row(ifinal);
        for (int k = 0; k <= ifinal; ++k) out[k] = row[k];
    }
    return v;
}

GreenSolution solve_green(const ResponseKernel& fine, double omega0, const TimeGrid& grid) {
    GreenSolution g;
    g.grid = grid;
    g.u = solve_u(fine, omega0, grid);
    g.v = solve_v(fine, omega0, grid, g.u);
    return g;
}

XbarTables xbar_tables(const GreenSolution& green) {
    const TimeGrid& grid = green.grid;
    for (int i = 0; i <= grid.n; ++i)
        if (std::abs(green.u[i]) < kSingularityThreshold)
            throw SingularityError("green: |u| below invertibility threshold", grid.node(i));

    XbarTables out{TwoVarTable(grid), OneVarTable(grid), TwoVarTable(grid)};
    for (int k = 0; k <= grid.n; ++k) out.x21.values[k] = std::conj(green.u[k]);
    for (int i = 0; i <= grid.n; ++i) {
        auto x11 = out.x11.row(i);
        auto y = out.y.row(i);
        auto v = green.v.row(i);
        const cplx inv_u = 1.0 / green.u[i];
        const cplx vii = v[i];
        for (int j = 0; j <= i; ++j) {
            const cplx ratio = green.u[j] * inv_u;
            x11[j] = ratio;
            y[j] = std::conj(green.u[i - j]) - 2.0 * (ratio * vii - v[j]);
        }
    }
    return out;
}

CoeffSeries assemble_B(const ResponseKernel& kernel, const XbarTables& tables, double omega0) {
    const TimeGrid& grid = kernel.grid;
    require_same_grid(tables.x11.grid(), grid, "assemble_B");
    CoeffSeries out = CoeffSeries::reals(grid, CoeffKind::oracle);
    for (int i = 0; i <= grid.n; ++i) {
        cplx freq(0.0, 0.0), up(0.0, 0.0), down(0.0, 0.0);
        auto x11 = tables.x11.row(i);
        auto y = tables.y.row(i);
        for (int j = 0; j <= i; ++j) {
            const double w = detail::trap_weight(j, 0, i, grid.h);
            if (w == 0.0) continue;
            freq += w * std::conj(kernel.a1[i - j]) * x11[j];
            up += w * std::conj(kernel.a2[i - j]) * tables.x21.values[i - j];
            down += w * std::conj(kernel.a1[i - j]) * y[j];
        }
        out.c1[i] = omega0 + freq.imag();
        out.c2[i] = freq.real();
        out.c3[i] = up.real() - down.real();
    }
    return out;
}

}  // namespace nmme

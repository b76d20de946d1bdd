#include "nmme/assemble.hpp"

namespace nmme {

CoeffSeries assemble_A(const ResponseKernel& kernel, const TwoVarTable& x11,
                       const OneVarTable& x21, const TwoVarTable& y, double omega0) {
    const TimeGrid& grid = kernel.grid;
    require_same_grid(x11.grid(), grid, "assemble_A(x11)");
    require_same_grid(x21.grid, grid, "assemble_A(x21)");
    require_same_grid(y.grid(), grid, "assemble_A(y)");

    CoeffSeries out = CoeffSeries::reals(grid, CoeffKind::cavity);
    for (int i = 0; i <= grid.n; ++i) {
        cplx freq(0.0, 0.0), up(0.0, 0.0), down(0.0, 0.0);
        auto x11r = x11.row(i);
        auto yr = y.row(i);
        for (int j = 0; j <= i; ++j) {
            const double w = detail::trap_weight(j, 0, i, grid.h);
            if (w == 0.0) continue;
            freq += w * std::conj(kernel.a1[i - j]) * std::conj(x11r[j]);
            up += w * std::conj(kernel.a2[i - j]) * std::conj(x21.values[i - j]);
            down += w * std::conj(kernel.a1[i - j]) * std::conj(yr[j]);
        }
        out.c1[i] = omega0 + freq.imag();
        out.c2[i] = freq.real();
        out.c3[i] = up.real() - down.real();
    }
    return out;
}

CoeffSeries assemble_CD(const ResponseKernel& kernel, const TwoVarTable& x13, const Drive& drive) {
    const TimeGrid& grid = kernel.grid;
    require_same_grid(x13.grid(), grid, "assemble_CD");

    CoeffSeries out = CoeffSeries::driven(grid);
    for (int i = 0; i <= grid.n; ++i) {
        const double eps = drive(grid.node(i));
        // shared kernel integral; conjugation is exact, so D == -conj(C) holds
        // bit for bit
        cplx g(0.0, 0.0);
        auto x13r = x13.row(i);
        for (int j = 0; j <= i; ++j) {
            const double w = detail::trap_weight(j, 0, i, grid.h);
            if (w == 0.0) continue;
            g += 0.5 * w * kernel.a1[i - j] * x13r[j];
        }
        out.C[i] = cplx(0.0, -eps) + g;
        out.D[i] = cplx(0.0, -eps) - std::conj(g);
    }
    return out;
}

CoeffSeries assemble_RS(const ResponseKernel& kernel, const TwoVarTable& x_tsa) {
    const TimeGrid& grid = kernel.grid;
    require_same_grid(x_tsa.grid(), grid, "assemble_RS");
    if (!kernel.temperature.is_zero())
        throw std::invalid_argument("assemble_RS: requires a zero-temperature kernel");

    CoeffSeries out = CoeffSeries::reals(grid, CoeffKind::two_state);
    for (int i = 0; i <= grid.n; ++i) {
        cplx acc(0.0, 0.0);
        auto xr = x_tsa.row(i);
        for (int j = 0; j <= i; ++j) {
            const double w = detail::trap_weight(j, 0, i, grid.h);
            if (w == 0.0) continue;
            acc += w * std::conj(kernel.a1[i - j]) * std::conj(xr[j]);
        }
        out.c1[i] = 2.0 * acc.real();  // R
        out.c2[i] = 2.0 * acc.imag();  // S
    }
    return out;
}

}  // namespace nmme

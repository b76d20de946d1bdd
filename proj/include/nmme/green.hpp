// green.hpp — propagator-function route: u, v integro-differential equations
//
// Independent of the integral-equation solvers; the two routes are compared
// numerically. u obeys
//     du/dtau + i w0 u + \int_0^tau conj(alpha1)(tau - s) u(s) ds = 0,
// u(0) = 1, integrated by classic RK4 with a trapezoid history convolution
// (the newest history point gets one predictor-corrector pass). v obeys the
// same left-hand side with the thermal source
//     (1/2) \int_0^t ds [conj(alpha2) - conj(alpha1)](tau - s) conj(u(t - s)),
// whose integration bound is the final time t, so v is stored per final time.
// The RK4 stages sit halfway between nodes, so these routines take the kernel
// sampled at half step (2n steps of h/2).

#pragma once

#include <vector>

#include "nmme/coeffs.hpp"
#include "nmme/grid.hpp"
#include "nmme/kernels.hpp"
#include "nmme/tables.hpp"

namespace nmme {

struct GreenSolution {
    TimeGrid grid;
    std::vector<cplx> u;  // u(t_k), k = 0..n; u[0] = 1
    TwoVarTable v;        // v.at(i, k) = v(final time t_i; tau = t_k), k <= i
};

// u alone (no thermal source needed).
std::vector<cplx> solve_u(const ResponseKernel& half_step_kernel, double omega0,
                          const TimeGrid& grid);

// v rows for every final time, given u on the same grid.
TwoVarTable solve_v(const ResponseKernel& half_step_kernel, double omega0, const TimeGrid& grid,
                    const std::vector<cplx>& u);

// u and v together.
GreenSolution solve_green(const ResponseKernel& half_step_kernel, double omega0,
                          const TimeGrid& grid);

struct XbarTables {
    TwoVarTable x11;  // u(t_j) / u(t_i)
    OneVarTable x21;  // conj(u(s))
    TwoVarTable y;    // conj(u(t_i - t_j)) - 2 (u(t_j)/u(t_i) v(i,i) - v(i,j))
};

// Throws SingularityError naming the first node where |u| < 1e-8.
XbarTables xbar_tables(const GreenSolution& green);

// Oracle-route coefficients B1..B3 on the coarse grid.
CoeffSeries assemble_B(const ResponseKernel& kernel, const XbarTables& tables, double omega0);

}  // namespace nmme

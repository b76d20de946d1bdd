// coefffuncs.hpp — integral equations for the coefficient functions
//
// All equations are discretized by composite trapezoid quadrature on the
// grid, nested in the order the integrals are written (outer t1, inner t2).
// For each fixed outer time t_i the unknown row is a dense linear system
// (I - K) f = g over nodes 0..i; dense-collocation factors it directly,
// picard iterates f <- g + K f. A solved table carries the largest discrete
// residual it leaves in its own equation (max_residual).

#pragma once

#include <optional>

#include <Eigen/Dense>

#include "nmme/drive.hpp"
#include "nmme/grid.hpp"
#include "nmme/kernels.hpp"
#include "nmme/tables.hpp"

namespace nmme {

enum class SolveMethod { dense_collocation, picard };

struct SolverPolicy {
    SolveMethod method = SolveMethod::dense_collocation;
    double picard_tol = 1e-10;
    int picard_max_iter = 200;
    double relaxation = 1.0;  // in (0, 1]

    void validate() const {
        if (!(picard_tol > 0.0)) throw std::invalid_argument("SolverPolicy: picard_tol must be positive");
        if (picard_max_iter <= 0) throw std::invalid_argument("SolverPolicy: picard_max_iter must be positive");
        if (!(relaxation > 0.0) || relaxation > 1.0)
            throw std::invalid_argument("SolverPolicy: relaxation must lie in (0, 1]");
    }
};

// Homogeneous-source row function: x11(t_i, t_j), diagonal value 1.
TwoVarTable solve_x11(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                      const SolverPolicy& policy = {});

// Translation-invariant one-variable form x21(s), x21(0) = 1.
OneVarTable solve_x21(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                      const SolverPolicy& policy = {});

// Solves the full two-variable equation for x21 by dense collocation on a
// small grid (n <= 100) and returns max_{i,j} |x21(t_i,t_j) - x21(t_i - t_j)|
// against the one-variable solution. Self-consistency contract: <= 10 h^2.
double verify_x21_translation_invariance(const ResponseKernel& kernel, double omega0,
                                         const TimeGrid& grid, const SolverPolicy& policy = {});

// Thermal-source row function; the source integral runs over the full range
// [0, t] and reaches the kernel at negative arguments (conjugate rule).
TwoVarTable solve_x12(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                      const OneVarTable& x21, const SolverPolicy& policy = {});

// y = x11 + x12 elementwise.
TwoVarTable compute_y(const TwoVarTable& x11, const TwoVarTable& x12);

// Drive-source row function; linear in the drive.
TwoVarTable solve_x13(const ResponseKernel& kernel, double omega0, const Drive& drive,
                      const TimeGrid& grid, const SolverPolicy& policy = {});

// Two-state-atom coefficient function; rotates with the opposite phase sense
// from the cavity family (the decay-identity tests pin the convention).
// Requires a zero-temperature kernel.
TwoVarTable solve_x_tsa(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                        const SolverPolicy& policy = {});

// Production entry: one pass over outer rows, sharing each row's
// factorization between x11, x12 (and x13 when a drive is present).
struct CavityTables {
    TwoVarTable x11;
    TwoVarTable x12;
    TwoVarTable y;
    OneVarTable x21;
    std::optional<TwoVarTable> x13;
};
CavityTables solve_cavity_tables(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                                 const SolverPolicy& policy = {}, const Drive* drive = nullptr);

namespace detail {
// Reference (non-incremental) assembly of the row-i kernel matrix; used to
// cross-check the solver's incremental updates in tests.
Eigen::MatrixXcd kernel_matrix_direct(const ResponseKernel& kernel, double omega0, int phase_sign,
                                      int i);
}  // namespace detail

}  // namespace nmme

#include "nmme/coefffuncs.hpp"

#include <cmath>

#include "nmme/errors.hpp"

namespace nmme {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

// Phase table ph[d] = exp(-i * sign * omega0 * t_d); E_{jl} = ph[l-j].
std::vector<cplx> phase_table(double omega0, int sign, const TimeGrid& grid) {
    std::vector<cplx> ph(grid.size());
    for (int d = 0; d <= grid.n; ++d) ph[d] = std::exp(cplx(0.0, -sign * omega0 * grid.node(d)));
    return ph;
}

void require_solver_grid(const ResponseKernel& kernel, const TimeGrid& grid, const char* where) {
    grid.validate();
    require_same_grid(kernel.grid, grid, where);
    if (grid.n < 4) throw std::invalid_argument(std::string(where) + ": need n >= 4");
}

// S_j = sum_{l=j}^{i} w(l;j,i) ph[l-j] q_l via one suffix sweep.
// With phi_l = ph[l] q_l this is conj(ph[j]) * h * (T_j - phi_j/2 - phi_i/2),
// which vanishes for j = i as the empty range requires.
void weighted_suffix(const std::vector<cplx>& ph, const VectorXcd& q, int i, double h,
                     VectorXcd& out) {
    cplx suffix(0.0, 0.0);
    std::vector<cplx> phi(i + 1);
    for (int l = 0; l <= i; ++l) phi[l] = ph[l] * q[l];
    for (int j = i; j >= 0; --j) {
        suffix += phi[j];
        out[j] = std::conj(ph[j]) * h * (suffix - 0.5 * phi[j] - 0.5 * phi[i]);
    }
}

struct RowSolver {
    const SolverPolicy& policy;
    double grid_h;

    // Solves (I - K) f = rhs for every column of rhs; returns the largest
    // residual over columns. K is the leading (m x m) block.
    double solve(const MatrixXcd& K, int m, MatrixXcd& rhs, double node_time) const {
        if (policy.method == SolveMethod::dense_collocation) return solve_dense(K, m, rhs);
        return solve_picard(K, m, rhs, node_time);
    }

  private:
    double solve_dense(const MatrixXcd& K, int m, MatrixXcd& rhs) const {
        MatrixXcd M = -K.topLeftCorner(m, m);
        M.diagonal().array() += 1.0;
        Eigen::PartialPivLU<MatrixXcd> lu(M);
        MatrixXcd f = lu.solve(rhs);
        if (!f.allFinite()) throw SolverError("coefffuncs: dense collocation produced a singular system");
        double resid = (M * f - rhs).cwiseAbs().maxCoeff();
        rhs = std::move(f);
        return resid;
    }

    double solve_picard(const MatrixXcd& K, int m, MatrixXcd& rhs, double node_time) const {
        const auto Kb = K.topLeftCorner(m, m);
        double worst = 0.0;
        for (int c = 0; c < rhs.cols(); ++c) {
            VectorXcd g = rhs.col(c);
            VectorXcd f = g;
            double prev = std::numeric_limits<double>::infinity();
            int growing = 0;
            bool done = false;
            for (int it = 0; it < policy.picard_max_iter; ++it) {
                VectorXcd next = g + Kb * f;
                const double resid = (next - f).cwiseAbs().maxCoeff();
                f = (1.0 - policy.relaxation) * f + policy.relaxation * next;
                if (resid <= policy.picard_tol) {
                    worst = std::max(worst, resid);
                    done = true;
                    break;
                }
                growing = resid > prev ? growing + 1 : 0;
                if (growing >= 10)
                    throw SolverError(
                        "coefffuncs: picard iteration diverging at t = " + std::to_string(node_time) +
                        " (residual " + std::to_string(resid) + "); use dense-collocation");
                prev = resid;
            }
            if (!done)
                throw SolverError("coefffuncs: picard did not reach tolerance within " +
                                  std::to_string(policy.picard_max_iter) + " iterations at t = " +
                                  std::to_string(node_time));
            rhs.col(c) = f;
        }
        return worst;
    }
};

struct FamilyTables {
    TwoVarTable x11;
    std::optional<TwoVarTable> x12;
    std::optional<TwoVarTable> x13;
};

// One sweep over outer rows i = 0..n. The row-i kernel matrix K is grown
// incrementally: advancing the outer endpoint from t_{i-1} to t_i adds the
// rank-2 correction
//   K_i = K_{i-1} + (h/2) ph[i-1-j] * B[i-1, :] + (h/2) ph[i-j] * B[i, :],
// where B[l, m] = w(m; 0, l) alpha1(t_{l-m}). Row i itself is empty, so
// f_i = g_i holds exactly for every source.
FamilyTables solve_family(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                          const SolverPolicy& policy, int sign, const OneVarTable* x21,
                          const Drive* drive) {
    policy.validate();
    const int n = grid.n;
    const double h = grid.h;
    const auto ph = phase_table(omega0, sign, grid);

    std::vector<double> eps;
    if (drive) {
        eps.resize(n + 1);
        for (int k = 0; k <= n; ++k) eps[k] = (*drive)(grid.node(k));
    }

    FamilyTables out{TwoVarTable(grid), std::nullopt, std::nullopt};
    if (x21) out.x12.emplace(grid);
    if (drive) out.x13.emplace(grid);
    const int nrhs = 1 + (x21 ? 1 : 0) + (drive ? 1 : 0);

    MatrixXcd K = MatrixXcd::Zero(n + 1, n + 1);
    VectorXcd b(n + 1), u(n + 1), q(n + 1), s(n + 1);
    MatrixXcd rhs(n + 1, nrhs);
    RowSolver row_solver{policy, h};

    double resid_x11 = 0.0, resid_x12 = 0.0, resid_x13 = 0.0;

    for (int i = 0; i <= n; ++i) {
        if (i > 0) {
            // rank-2 kernel update, rows 0..i-1, columns 0..i
            for (int pass = 0; pass < 2; ++pass) {
                const int l = i - 1 + pass;  // contributing inner row: i-1 reweighted, i appended
                for (int m = 0; m <= i; ++m)
                    b[m] = detail::trap_weight(m, 0, l, h) * kernel.a1_at(l - m);
                for (int j = 0; j < i; ++j) u[j] = 0.5 * h * ph[l - j];
                K.topLeftCorner(i, i + 1).noalias() +=
                    u.head(i) * b.head(i + 1).transpose();
            }
        }

        const int m = i + 1;
        int col = 0;
        for (int j = 0; j <= i; ++j) rhs(j, col) = ph[i - j];  // x11 source
        ++col;
        if (x21) {
            // q_l = sum_m w(m;0,i) alpha2(t_{l-m}) x21(t_{i-m}); note the full
            // inner range, which reaches negative kernel arguments for m > l
            for (int l = 0; l <= i; ++l) {
                cplx acc(0.0, 0.0);
                for (int mm = 0; mm <= i; ++mm)
                    acc += detail::trap_weight(mm, 0, i, h) * kernel.a2_at(l - mm) *
                           x21->values[i - mm];
                q[l] = acc;
            }
            weighted_suffix(ph, q, i, h, s);
            for (int j = 0; j <= i; ++j) rhs(j, col) = -s[j];
            ++col;
        }
        if (drive) {
            for (int l = 0; l <= i; ++l) q[l] = eps[l];
            weighted_suffix(ph, q, i, h, s);
            for (int j = 0; j <= i; ++j) rhs(j, col) = cplx(0.0, -2.0) * s[j];
            ++col;
        }

        MatrixXcd block = rhs.topRows(m);
        const double resid = row_solver.solve(K, m, block, grid.node(i));

        col = 0;
        auto r11 = out.x11.row(i);
        for (int j = 0; j <= i; ++j) r11[j] = block(j, col);
        resid_x11 = std::max(resid_x11, resid);
        ++col;
        if (x21) {
            auto r12 = out.x12->row(i);
            for (int j = 0; j <= i; ++j) r12[j] = block(j, col);
            resid_x12 = std::max(resid_x12, resid);
            ++col;
        }
        if (drive) {
            auto r13 = out.x13->row(i);
            for (int j = 0; j <= i; ++j) r13[j] = block(j, col);
            resid_x13 = std::max(resid_x13, resid);
            ++col;
        }
    }

    out.x11.max_residual = resid_x11;
    if (out.x12) out.x12->max_residual = resid_x12;
    if (out.x13) out.x13->max_residual = resid_x13;
    return out;
}

// Packed coefficients of the one-variable equation,
//   x[k] = g_k - sum_{m=0}^{k} c[k][m] x[k-m],
//   c[k][m] = sum_{l=0}^{m} w(l;0,k) w(m;l,k) e^{-i w0 t_l} conj(alpha1(t_{m-l})).
struct X21Coefficients {
    std::vector<cplx> packed;  // row k at offset k(k+1)/2, length k+1
    cplx at(int k, int m) const { return packed[std::size_t(k) * (k + 1) / 2 + m]; }
};

X21Coefficients x21_coefficients(const ResponseKernel& kernel, double omega0, const TimeGrid& grid) {
    const int n = grid.n;
    const double h = grid.h;
    const auto ph = phase_table(omega0, +1, grid);  // e^{-i w0 t}
    X21Coefficients c;
    c.packed.assign(std::size_t(n + 1) * (n + 2) / 2, cplx(0.0, 0.0));
    std::size_t pos = 0;
    for (int k = 0; k <= n; ++k) {
        for (int m = 0; m <= k; ++m, ++pos) {
            cplx acc(0.0, 0.0);
            for (int l = 0; l <= m; ++l) {
                const double w = detail::trap_weight(l, 0, k, h) * detail::trap_weight(m, l, k, h);
                if (w != 0.0) acc += w * ph[l] * std::conj(kernel.a1[m - l]);
            }
            c.packed[pos] = acc;
        }
    }
    return c;
}

OneVarTable solve_x21_impl(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                           const SolverPolicy& policy) {
    const auto c = x21_coefficients(kernel, omega0, grid);
    const auto ph = phase_table(omega0, +1, grid);
    OneVarTable table(grid);
    auto& x = table.values;

    if (policy.method == SolveMethod::dense_collocation) {
        // lower-triangular system; forward substitution
        for (int k = 0; k <= grid.n; ++k) {
            cplx acc = ph[k];
            for (int m = 1; m <= k; ++m) acc -= c.at(k, m) * x[k - m];
            x[k] = acc / (1.0 + c.at(k, 0));
        }
    } else {
        for (int k = 0; k <= grid.n; ++k) x[k] = ph[k];
        double prev = std::numeric_limits<double>::infinity();
        int growing = 0;
        bool done = false;
        for (int it = 0; it < policy.picard_max_iter; ++it) {
            double step = 0.0;
            std::vector<cplx> next(grid.size());
            for (int k = 0; k <= grid.n; ++k) {
                cplx acc = ph[k];
                for (int m = 0; m <= k; ++m) acc -= c.at(k, m) * x[k - m];
                next[k] = acc;
            }
            for (int k = 0; k <= grid.n; ++k) {
                step = std::max(step, std::abs(next[k] - x[k]));
                x[k] = (1.0 - policy.relaxation) * x[k] + policy.relaxation * next[k];
            }
            if (step <= policy.picard_tol) {
                done = true;
                break;
            }
            growing = step > prev ? growing + 1 : 0;
            if (growing >= 10)
                throw SolverError("coefffuncs: picard iteration diverging on x21 (residual " +
                                  std::to_string(step) + "); use dense-collocation");
            prev = step;
        }
        if (!done) throw SolverError("coefffuncs: picard did not converge on x21");
    }

    double resid = 0.0;
    for (int k = 0; k <= grid.n; ++k) {
        cplx acc = ph[k];
        for (int m = 0; m <= k; ++m) acc -= c.at(k, m) * x[k - m];
        resid = std::max(resid, std::abs(acc - x[k]));
    }
    table.max_residual = resid;
    return table;
}

}  // namespace

namespace detail {

Eigen::MatrixXcd kernel_matrix_direct(const ResponseKernel& kernel, double omega0, int phase_sign,
                                      int i) {
    const TimeGrid& grid = kernel.grid;
    const double h = grid.h;
    const auto ph = phase_table(omega0, phase_sign, grid);
    MatrixXcd K = MatrixXcd::Zero(i + 1, i + 1);
    for (int j = 0; j <= i; ++j)
        for (int m = 0; m <= i; ++m) {
            cplx acc(0.0, 0.0);
            for (int l = std::max(j, m); l <= i; ++l) {
                const double w = trap_weight(l, j, i, h) * trap_weight(m, 0, l, h);
                if (w != 0.0) acc += w * ph[l - j] * kernel.a1_at(l - m);
            }
            K(j, m) = acc;
        }
    return K;
}

}  // namespace detail

TwoVarTable solve_x11(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                      const SolverPolicy& policy) {
    require_solver_grid(kernel, grid, "solve_x11");
    return std::move(solve_family(kernel, omega0, grid, policy, +1, nullptr, nullptr).x11);
}

OneVarTable solve_x21(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                      const SolverPolicy& policy) {
    require_solver_grid(kernel, grid, "solve_x21");
    policy.validate();
    return solve_x21_impl(kernel, omega0, grid, policy);
}

TwoVarTable solve_x12(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                      const OneVarTable& x21, const SolverPolicy& policy) {
    require_solver_grid(kernel, grid, "solve_x12");
    require_same_grid(x21.grid, grid, "solve_x12(x21)");
    return std::move(*solve_family(kernel, omega0, grid, policy, +1, &x21, nullptr).x12);
}

TwoVarTable compute_y(const TwoVarTable& x11, const TwoVarTable& x12) {
    require_same_grid(x11.grid(), x12.grid(), "compute_y");
    TwoVarTable y(x11.grid());
    for (int i = 0; i <= y.grid().n; ++i) {
        auto out = y.row(i);
        auto a = x11.row(i);
        auto b = x12.row(i);
        for (int j = 0; j <= i; ++j) out[j] = a[j] + b[j];
    }
    y.max_residual = x11.max_residual + x12.max_residual;
    return y;
}

TwoVarTable solve_x13(const ResponseKernel& kernel, double omega0, const Drive& drive,
                      const TimeGrid& grid, const SolverPolicy& policy) {
    require_solver_grid(kernel, grid, "solve_x13");
    return std::move(*solve_family(kernel, omega0, grid, policy, +1, nullptr, &drive).x13);
}

TwoVarTable solve_x_tsa(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                        const SolverPolicy& policy) {
    require_solver_grid(kernel, grid, "solve_x_tsa");
    if (!kernel.temperature.is_zero())
        throw std::invalid_argument("solve_x_tsa: requires a zero-temperature kernel");
    return std::move(solve_family(kernel, omega0, grid, policy, -1, nullptr, nullptr).x11);
}

CavityTables solve_cavity_tables(const ResponseKernel& kernel, double omega0, const TimeGrid& grid,
                                 const SolverPolicy& policy, const Drive* drive) {
    require_solver_grid(kernel, grid, "solve_cavity_tables");
    OneVarTable x21 = solve_x21_impl(kernel, omega0, grid, policy);
    auto fam = solve_family(kernel, omega0, grid, policy, +1, &x21, drive);
    CavityTables out{std::move(fam.x11), std::move(*fam.x12), TwoVarTable(grid), std::move(x21),
                     std::move(fam.x13)};
    out.y = compute_y(out.x11, out.x12);
    return out;
}

double verify_x21_translation_invariance(const ResponseKernel& kernel, double omega0,
                                         const TimeGrid& grid, const SolverPolicy& policy) {
    require_solver_grid(kernel, grid, "verify_x21_translation_invariance");
    if (grid.n > 100)
        throw std::invalid_argument("verify_x21_translation_invariance: use n <= 100");
    policy.validate();

    const OneVarTable x1d = solve_x21_impl(kernel, omega0, grid, policy);
    const int n = grid.n;
    const double h = grid.h;
    const auto ph = phase_table(omega0, +1, grid);

    // two-variable form: x(t_i,t_j) = g - sum over t_j <= t1 <= t2 <= t_i of
    // w e^{-i w0 (t1 - t_j)} conj(alpha1(t2 - t1)) x(t_i, t2)
    double discrepancy = 0.0;
    RowSolver row_solver{policy, h};
    for (int i = 0; i <= n; ++i) {
        MatrixXcd K = MatrixXcd::Zero(i + 1, i + 1);
        for (int j = 0; j <= i; ++j)
            for (int m = j; m <= i; ++m) {
                cplx acc(0.0, 0.0);
                for (int l = j; l <= m; ++l) {
                    const double w = detail::trap_weight(l, j, i, h) * detail::trap_weight(m, l, i, h);
                    if (w != 0.0) acc += w * ph[l - j] * std::conj(kernel.a1[m - l]);
                }
                K(j, m) = -acc;  // equation carries the kernel with a minus sign
            }
        MatrixXcd rhs(i + 1, 1);
        for (int j = 0; j <= i; ++j) rhs(j, 0) = ph[i - j];
        row_solver.solve(K, i + 1, rhs, grid.node(i));
        for (int j = 0; j <= i; ++j)
            discrepancy = std::max(discrepancy, std::abs(rhs(j, 0) - x1d.values[i - j]));
    }
    return discrepancy;
}

}  // namespace nmme

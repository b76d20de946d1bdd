// grid.hpp — uniform time grid shared by kernels, solvers and propagators

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace nmme {

using cplx = std::complex<double>;

// Uniform grid t_k = k*h, k = 0..n. n is kept even so that the density-matrix
// propagator, which advances by 2h, lands on grid nodes.
struct TimeGrid {
    double h{0.0};
    int n{0};

    TimeGrid() = default;
    TimeGrid(double step, int steps) : h(step), n(steps) { validate(); }

    static TimeGrid from_horizon(double horizon, int steps) {
        if (steps <= 0) throw std::invalid_argument("TimeGrid: steps must be positive");
        return TimeGrid(horizon / steps, steps);
    }

    double node(int k) const { return h * k; }
    double horizon() const { return h * n; }
    int size() const { return n + 1; }

    void validate() const {
        if (!(h > 0.0)) throw std::invalid_argument("TimeGrid: step must be positive");
        if (n < 2) throw std::invalid_argument("TimeGrid: need at least 2 steps");
        if (n % 2 != 0) throw std::invalid_argument("TimeGrid: step count must be even");
    }

    bool operator==(const TimeGrid& other) const = default;
};

// Grid with half the step and twice the node count; covers the same horizon.
// The coarse nodes coincide bit-exactly with the even fine nodes.
inline TimeGrid refined(const TimeGrid& g) { return TimeGrid(g.h * 0.5, g.n * 2); }

inline void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
    if (!(a == b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

namespace detail {

// Composite-trapezoid weight of node m on [t_a, t_b]; zero off-range and for
// the empty range a == b. Every discrete integral in the library uses these
// weights, so the two coefficient routes differ only in their equations.
inline double trap_weight(int m, int a, int b, double h) {
    if (b <= a || m < a || m > b) return 0.0;
    return (m == a || m == b) ? 0.5 * h : h;
}

}  // namespace detail

}  // namespace nmme

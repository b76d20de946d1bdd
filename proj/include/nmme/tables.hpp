// tables.hpp — triangular storage for two-time coefficient functions

#pragma once

#include <span>
#include <vector>

#include "nmme/grid.hpp"

namespace nmme {

// f(t_i, t_j) for 0 <= j <= i <= n, stored packed row by row. Access with
// j > i is a contract violation (checked).
class TwoVarTable {
  public:
    TwoVarTable() = default;
    explicit TwoVarTable(const TimeGrid& grid)
        : grid_(grid), values_(std::size_t(grid.n + 1) * (grid.n + 2) / 2, cplx(0.0, 0.0)) {}

    const TimeGrid& grid() const { return grid_; }

    cplx at(int i, int j) const {
        check(i, j);
        return values_[offset(i) + j];
    }
    cplx& at(int i, int j) {
        check(i, j);
        return values_[offset(i) + j];
    }

    std::span<const cplx> row(int i) const { return {values_.data() + offset(i), std::size_t(i) + 1}; }
    std::span<cplx> row(int i) { return {values_.data() + offset(i), std::size_t(i) + 1}; }

    // Largest max-norm residual of the discretized equation over all rows,
    // recorded by the solver that produced the table.
    double max_residual = 0.0;

  private:
    static std::size_t offset(int i) { return std::size_t(i) * (i + 1) / 2; }
    void check(int i, int j) const {
        if (i < 0 || i > grid_.n || j < 0 || j > i)
            throw std::out_of_range("TwoVarTable: index outside lower triangle");
    }

    TimeGrid grid_;
    std::vector<cplx> values_;
};

// g(s = k*h), k = 0..n.
struct OneVarTable {
    TimeGrid grid;
    std::vector<cplx> values;
    double max_residual = 0.0;

    OneVarTable() = default;
    explicit OneVarTable(const TimeGrid& g) : grid(g), values(g.size(), cplx(0.0, 0.0)) {}

    cplx at(int k) const { return values[k]; }
};

}  // namespace nmme

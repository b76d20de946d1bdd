// coeffs.hpp — master-equation coefficient time series

#pragma once

#include <vector>

#include "nmme/grid.hpp"

namespace nmme {

enum class CoeffKind {
    cavity,        // A1 (frequency), A2 (dissipation), A3 (fluctuation), all real
    driven_extra,  // C, D complex; D = -conj(C) node by node
    two_state,     // R (decay rate), S (frequency shift), real
    oracle,        // B1..B3 from the propagator-function route
};

struct CoeffSeries {
    TimeGrid grid;
    CoeffKind kind{CoeffKind::cavity};
    std::vector<double> c1, c2, c3;  // cavity/oracle: A/B 1..3; two_state: R, S
    std::vector<cplx> C, D;          // driven_extra only

    static CoeffSeries reals(const TimeGrid& g, CoeffKind k) {
        CoeffSeries s;
        s.grid = g;
        s.kind = k;
        s.c1.assign(g.size(), 0.0);
        s.c2.assign(g.size(), 0.0);
        if (k == CoeffKind::cavity || k == CoeffKind::oracle) s.c3.assign(g.size(), 0.0);
        return s;
    }
    static CoeffSeries driven(const TimeGrid& g) {
        CoeffSeries s;
        s.grid = g;
        s.kind = CoeffKind::driven_extra;
        s.C.assign(g.size(), cplx(0.0, 0.0));
        s.D.assign(g.size(), cplx(0.0, 0.0));
        return s;
    }
};

}  // namespace nmme

// kernels.hpp — bath response kernels alpha1, alpha2 and their grid sampling
//
// Convention: alpha1(t) = \int_0^inf dw J(w) e^{+i w t}; alpha2 carries the
// thermal coth(beta*w/2) weight and reduces to alpha1 at zero temperature.
// Negative time arguments evaluate as conjugates, alpha(-s) = conj(alpha(s)),
// which is exact for real J.

#pragma once

#include <vector>

#include "nmme/grid.hpp"
#include "nmme/spectral.hpp"

namespace nmme {

// alpha1 at time t. Closed forms for OhmicExp, LorentzianExtended, FlatCutoff
// and Null; adaptive quadrature (relative tolerance 1e-10) otherwise.
cplx alpha1(const SpectralModel& model, double t);

// alpha2 at time t. Zero temperature returns alpha1 exactly. Finite beta
// requires a bounded J(w)/w near w = 0 and integrates the coth-weighted
// density by adaptive quadrature, with the interval split at w = 2/beta and a
// series evaluation of w*coth(beta*w/2) near the origin.
cplx alpha2(const SpectralModel& model, const Temperature& temperature, double t);

struct ResponseKernel {
    TimeGrid grid;
    std::vector<cplx> a1;  // alpha1(k*h), k = 0..n
    std::vector<cplx> a2;  // alpha2(k*h)
    Temperature temperature;

    // Kernel value at signed node offset; negative offsets conjugate.
    cplx a1_at(int k) const { return k >= 0 ? a1[k] : std::conj(a1[-k]); }
    cplx a2_at(int k) const { return k >= 0 ? a2[k] : std::conj(a2[-k]); }

    // Same sampling with both kernels conjugated (used by oracle runs that
    // need the opposite rotation sense).
    ResponseKernel conjugated() const;

    // Every other sample of a kernel tabulated at half step; values at the
    // shared nodes are bit-identical.
    ResponseKernel decimated() const;
};

// Tabulate both kernels on the grid.
ResponseKernel sample_kernels(const SpectralModel& model, const Temperature& temperature,
                              const TimeGrid& grid);

namespace detail {
// w * coth(w), series near 0, stable everywhere.
double xcoth(double x);
// Upper integration limit: past it J (times the saturated coth weight) is
// below 1e-16 of its maximum.
double truncation_frequency(const SpectralModel& model);
}  // namespace detail

}  // namespace nmme

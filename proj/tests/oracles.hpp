// oracles.hpp — independent reference computations used only by tests.
// Deliberately brute force: these must not share a code path with the
// implementations they check.

#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "nmme/grid.hpp"
#include "nmme/spectral.hpp"

namespace nmme::oracle {

// Plain N-point trapezoid of the spectral integral \int J(w) weight(w) e^{iwt} dw.
inline cplx brute_spectral_integral(const SpectralModel& model, double w_hi, double t,
                                    double beta /* <= 0: no coth weight */,
                                    long points = 1'000'000) {
    auto xcoth = [](double x) {
        if (std::abs(x) < 1e-4) return 1.0 + x * x / 3.0;
        return x / std::tanh(x);
    };
    const double dw = w_hi / double(points);
    cplx acc(0.0, 0.0);
    for (long k = 0; k <= points; ++k) {
        const double w = k * dw;
        double f = spectral_density(model, w);
        if (beta > 0.0) {
            // J coth(beta w / 2) = (2/beta) (J/w) xcoth(beta w / 2); at w = 0 the
            // Ohmic-type densities have J/w -> finite slope
            const double j_over_w = w > 0.0 ? f / w : spectral_density(model, 1e-12) / 1e-12;
            f = (2.0 / beta) * j_over_w * xcoth(0.5 * beta * w);
        }
        const double weight = (k == 0 || k == points) ? 0.5 : 1.0;
        acc += weight * f * std::exp(cplx(0.0, w * t));
    }
    return acc * dw;
}

// Closed form for the memory equation with an exponential kernel
// conj(a1)(s) = g e^{(i wk - lam) s}:
//   du/dt = -i w0 u - w,  dw/dt = g u + (i wk - lam) w,  u(0)=1, w(0)=0,
// solved exactly through the eigendecomposition of the 2x2 matrix.
inline cplx exponential_kernel_u(double omega0, cplx g, cplx rate, double t) {
    // rate = i wk - lam
    const cplx a(0.0, -omega0);
    const cplx tr = a + rate;
    const cplx det = a * rate + g;
    cplx disc = std::sqrt(tr * tr - 4.0 * det);
    const cplx mu1 = 0.5 * (tr + disc);
    const cplx mu2 = 0.5 * (tr - disc);
    if (std::abs(mu1 - mu2) < 1e-12) {  // defective limit
        return std::exp(mu1 * t) * (1.0 + (a - mu1) * t);
    }
    // u(t) = [e^{mu1 t}(mu1 - rate) - e^{mu2 t}(mu2 - rate)] / (mu1 - mu2)
    return (std::exp(mu1 * t) * (mu1 - rate) - std::exp(mu2 * t) * (mu2 - rate)) / (mu1 - mu2);
}

// Driven harmonic amplitude: d alpha/dt = -i w0 alpha - i E, alpha(0) = a0.
inline cplx displaced_amplitude(cplx a0, double omega0, double e_field, double t) {
    const cplx ph = std::exp(cplx(0.0, -omega0 * t));
    return ph * a0 - (e_field / omega0) * (1.0 - ph);
}

}  // namespace nmme::oracle

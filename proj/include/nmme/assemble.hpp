// assemble.hpp — coefficient assembly from solved tables
//
// The quadrature weights are the same trapezoid weights the solvers use, so
// a comparison of the two coefficient routes measures route differences, not
// quadrature differences. The propagator reads coefficients at nodes only.

#pragma once

#include "nmme/coeffs.hpp"
#include "nmme/drive.hpp"
#include "nmme/kernels.hpp"
#include "nmme/tables.hpp"

namespace nmme {

// Cavity coefficients:
//   A1 = w0 + Im \int_0^t conj(alpha1) conj(x11),  A2 its Re,
//   A3 = Re \int conj(alpha2) conj(x21(t - t')) - Re \int conj(alpha1) conj(y).
CoeffSeries assemble_A(const ResponseKernel& kernel, const TwoVarTable& x11,
                       const OneVarTable& x21, const TwoVarTable& y, double omega0);

// Driving coefficients:
//   C = -i eps(t) + (1/2) \int alpha1 x13,
//   D = -i eps(t) - (1/2) \int conj(alpha1) conj(x13) = -conj(C), exactly.
CoeffSeries assemble_CD(const ResponseKernel& kernel, const TwoVarTable& x13, const Drive& drive);

// Two-state coefficients: R = 2 Re I, S = 2 Im I with
//   I = \int_0^t conj(alpha) conj(x). Requires a zero-temperature kernel.
CoeffSeries assemble_RS(const ResponseKernel& kernel, const TwoVarTable& x_tsa);

}  // namespace nmme

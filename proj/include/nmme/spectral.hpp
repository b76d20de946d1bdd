// spectral.hpp — bath spectral density catalog

#pragma once

#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "nmme/grid.hpp"

namespace nmme {

// J(omega) = 0; closed system.
struct NullBath {};

// J(omega) = eta * omega * exp(-omega/omega_c), omega >= 0.
struct OhmicExp {
    double eta{0.0};
    double omega_c{0.0};
};

// Damped-mode kernel given directly as alpha(t) = (gamma0*lambda/2) *
// exp(i*omega_center*t - lambda*|t|), the full-line extension of a Lorentzian
// line of width lambda centered at omega_center. There is no half-line J for
// this model; it exists to make exact decay checks possible.
struct LorentzianExtended {
    double gamma0{0.0};
    double lambda{0.0};
    double omega_center{0.0};
};

// J(omega) = gamma/pi on [0, omega_max], zero outside.
struct FlatCutoff {
    double gamma{0.0};
    double omega_max{0.0};
};

// Piecewise-linear J from ascending samples. If the first node sits at
// omega = 0 its value must be 0 so that J/omega stays bounded.
struct Tabulated {
    std::vector<double> omega;
    std::vector<double> j;
};

using SpectralModel = std::variant<NullBath, OhmicExp, LorentzianExtended, FlatCutoff, Tabulated>;

// Throws std::invalid_argument when parameters are out of range.
void validate(const SpectralModel& model);

// Pointwise J(omega); omega < 0 or outside support yields 0.
// LorentzianExtended has no half-line density and throws.
double spectral_density(const SpectralModel& model, double omega);

// True when lim_{omega->0+} J(omega)/omega is finite; needed by the thermal kernel.
bool has_bounded_j_over_omega(const SpectralModel& model);

// Inverse temperature, with a distinguished zero-temperature (beta -> inf) state.
struct Temperature {
    static Temperature zero() { return Temperature{}; }
    static Temperature inverse(double beta) {
        if (!(beta > 0.0)) throw std::invalid_argument("Temperature: beta must be positive");
        Temperature t;
        t.beta_ = beta;
        return t;
    }

    bool is_zero() const { return !beta_.has_value(); }
    double beta() const {
        if (!beta_) throw std::logic_error("Temperature: no finite beta at zero temperature");
        return *beta_;
    }

    bool operator==(const Temperature& other) const = default;

  private:
    std::optional<double> beta_;
};

}  // namespace nmme

#include "nmme/spectral.hpp"

#include <cmath>

namespace nmme {

namespace {

struct Validator {
    void operator()(const NullBath&) const {}
    void operator()(const OhmicExp& m) const {
        if (!(m.eta > 0.0)) throw std::invalid_argument("OhmicExp: eta must be positive");
        if (!(m.omega_c > 0.0)) throw std::invalid_argument("OhmicExp: omega_c must be positive");
    }
    void operator()(const LorentzianExtended& m) const {
        if (!(m.gamma0 > 0.0)) throw std::invalid_argument("LorentzianExtended: gamma0 must be positive");
        if (!(m.lambda > 0.0)) throw std::invalid_argument("LorentzianExtended: lambda must be positive");
        if (!(m.omega_center > 0.0))
            throw std::invalid_argument("LorentzianExtended: omega_center must be positive");
    }
    void operator()(const FlatCutoff& m) const {
        if (!(m.gamma > 0.0)) throw std::invalid_argument("FlatCutoff: gamma must be positive");
        if (!(m.omega_max > 0.0)) throw std::invalid_argument("FlatCutoff: omega_max must be positive");
    }
    void operator()(const Tabulated& m) const {
        if (m.omega.size() < 2 || m.omega.size() != m.j.size())
            throw std::invalid_argument("Tabulated: need matching omega/J samples (>= 2)");
        if (m.omega.front() < 0.0)
            throw std::invalid_argument("Tabulated: frequencies must be nonnegative");
        for (std::size_t k = 1; k < m.omega.size(); ++k)
            if (!(m.omega[k] > m.omega[k - 1]))
                throw std::invalid_argument("Tabulated: frequencies must be strictly ascending");
        for (double v : m.j)
            if (v < 0.0 || !std::isfinite(v))
                throw std::invalid_argument("Tabulated: J must be finite and nonnegative");
    }
};

}  // namespace

void validate(const SpectralModel& model) { std::visit(Validator{}, model); }

double spectral_density(const SpectralModel& model, double omega) {
    return std::visit(
        [omega](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NullBath>) {
                return 0.0;
            } else if constexpr (std::is_same_v<M, OhmicExp>) {
                if (omega <= 0.0) return 0.0;
                return m.eta * omega * std::exp(-omega / m.omega_c);
            } else if constexpr (std::is_same_v<M, LorentzianExtended>) {
                throw std::invalid_argument(
                    "LorentzianExtended: kernel is defined directly; no half-line spectral density");
            } else if constexpr (std::is_same_v<M, FlatCutoff>) {
                return (omega >= 0.0 && omega <= m.omega_max) ? m.gamma / M_PI : 0.0;
            } else {
                if (omega < m.omega.front() || omega > m.omega.back()) return 0.0;
                auto hi = std::upper_bound(m.omega.begin(), m.omega.end(), omega);
                std::size_t k = (hi == m.omega.end()) ? m.omega.size() - 1 : hi - m.omega.begin();
                if (k == 0) k = 1;
                const double w0 = m.omega[k - 1], w1 = m.omega[k];
                const double s = (omega - w0) / (w1 - w0);
                return (1.0 - s) * m.j[k - 1] + s * m.j[k];
            }
        },
        model);
}

bool has_bounded_j_over_omega(const SpectralModel& model) {
    return std::visit(
        [](const auto& m) -> bool {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NullBath>) {
                return true;
            } else if constexpr (std::is_same_v<M, OhmicExp>) {
                return true;  // J/w -> eta
            } else if constexpr (std::is_same_v<M, LorentzianExtended>) {
                return false;  // no half-line J at all
            } else if constexpr (std::is_same_v<M, FlatCutoff>) {
                return false;  // J(0+) = gamma/pi > 0
            } else {
                return m.omega.front() > 0.0 || m.j.front() == 0.0;
            }
        },
        model);
}

}  // namespace nmme

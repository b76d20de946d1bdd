#include "nmme/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nmme/errors.hpp"

namespace nmme {

namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxDepth = 18;

using GK = boost::math::quadrature::gauss_kronrod<double, 15>;

// Adaptive panel integration of a complex integrand; throws when the error
// estimate fails the relative tolerance by a wide margin.
template <typename F>
cplx integrate_panel(F&& f, double a, double b, const char* what) {
    if (!(b > a)) return cplx(0.0, 0.0);
    double err = 0.0, l1 = 0.0;
    cplx value = GK::integrate(std::forward<F>(f), a, b, kMaxDepth, kRelTol, &err, &l1);
    if (err > 1e-8 * std::max(l1, 1e-12))
        throw QuadratureError(std::string("kernels: quadrature failed to converge for ") + what, err);
    return value;
}

cplx eiwt(double omega, double t) { return std::exp(cplx(0.0, omega * t)); }

// alpha1 for t >= 0; negative t handled by the public conjugate rule.
cplx alpha1_nonneg(const SpectralModel& model, double t) {
    return std::visit(
        [t, &model](const auto& m) -> cplx {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NullBath>) {
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<M, OhmicExp>) {
                const cplx den(1.0, -m.omega_c * t);
                return m.eta * m.omega_c * m.omega_c / (den * den);
            } else if constexpr (std::is_same_v<M, LorentzianExtended>) {
                return 0.5 * m.gamma0 * m.lambda *
                       std::exp(cplx(-m.lambda * t, m.omega_center * t));
            } else if constexpr (std::is_same_v<M, FlatCutoff>) {
                if (t == 0.0) return {m.gamma * m.omega_max / M_PI, 0.0};
                const cplx it(0.0, t);
                return (m.gamma / M_PI) * (std::exp(it * m.omega_max) - 1.0) / it;
            } else {
                // piecewise-linear J: adaptive quadrature per segment keeps
                // the integrand smooth inside each panel
                cplx acc(0.0, 0.0);
                for (std::size_t k = 1; k < m.omega.size(); ++k) {
                    auto f = [&](double w) { return spectral_density(model, w) * eiwt(w, t); };
                    acc += integrate_panel(f, m.omega[k - 1], m.omega[k], "alpha1 (tabulated)");
                }
                return acc;
            }
        },
        model);
}

cplx alpha2_nonneg(const SpectralModel& model, double beta, double t) {
    return std::visit(
        [t, beta, &model](const auto& m) -> cplx {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, NullBath>) {
                return {0.0, 0.0};
            } else if constexpr (std::is_same_v<M, LorentzianExtended>) {
                throw std::invalid_argument(
                    "alpha2: LorentzianExtended defines its kernel directly and supports only "
                    "zero temperature");
            } else {
                if (!has_bounded_j_over_omega(model))
                    throw std::invalid_argument(
                        "alpha2: J(w)/w unbounded at w -> 0; thermal kernel diverges");
                // J(w) coth(beta w/2) = (2/beta) * (J(w)/w) * xcoth(beta w / 2)
                auto f = [&](double w) -> cplx {
                    const double x = 0.5 * beta * w;
                    double j_over_w;
                    if constexpr (std::is_same_v<M, OhmicExp>) {
                        j_over_w = m.eta * std::exp(-w / m.omega_c);
                    } else {
                        if (w > 0.0) {
                            j_over_w = spectral_density(model, w) / w;
                        } else {
                            // first tabulated segment starts at (0, 0); use its slope
                            const Tabulated& tab = std::get<Tabulated>(model);
                            j_over_w = tab.j[1] / tab.omega[1];
                        }
                    }
                    return (2.0 / beta) * j_over_w * detail::xcoth(x) * eiwt(w, t);
                };
                cplx acc(0.0, 0.0);
                std::vector<double> cuts;
                if constexpr (std::is_same_v<M, Tabulated>) {
                    cuts.assign(m.omega.begin(), m.omega.end());
                    const double split = 2.0 / beta;
                    if (split > cuts.front() && split < cuts.back()) cuts.push_back(split);
                    std::sort(cuts.begin(), cuts.end());
                } else {
                    cuts = {0.0, 2.0 / beta, detail::truncation_frequency(model)};
                }
                for (std::size_t k = 1; k < cuts.size(); ++k)
                    acc += integrate_panel(f, cuts[k - 1], cuts[k], "alpha2");
                return acc;
            }
        },
        model);
}

}  // namespace

namespace detail {

double xcoth(double x) {
    const double ax = std::abs(x);
    if (ax < 0.25) {
        const double x2 = x * x;
        // x*coth(x) = 1 + x^2/3 - x^4/45 + 2x^6/945 - x^8/4725
        return 1.0 + x2 * (1.0 / 3.0 + x2 * (-1.0 / 45.0 + x2 * (2.0 / 945.0 - x2 / 4725.0)));
    }
    return x / std::tanh(x);
}

double truncation_frequency(const SpectralModel& model) {
    return std::visit(
        [&model](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, OhmicExp>) {
                // solve w e^{-w/wc} = 1e-16 * (wc/e) by doubling then bisection
                const double peak = m.omega_c / std::exp(1.0);
                double lo = m.omega_c, hi = 2.0 * m.omega_c;
                auto rel = [&](double w) { return spectral_density(model, w) / (m.eta * peak); };
                while (rel(hi) > 1e-16) hi *= 2.0;
                for (int it = 0; it < 200 && hi - lo > 1e-6 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    (rel(mid) > 1e-16 ? lo : hi) = mid;
                }
                return hi;
            } else if constexpr (std::is_same_v<M, FlatCutoff>) {
                return m.omega_max;
            } else if constexpr (std::is_same_v<M, Tabulated>) {
                return m.omega.back();
            } else {
                return 0.0;
            }
        },
        model);
}

}  // namespace detail

cplx alpha1(const SpectralModel& model, double t) {
    validate(model);
    if (t < 0.0) return std::conj(alpha1_nonneg(model, -t));
    return alpha1_nonneg(model, t);
}

cplx alpha2(const SpectralModel& model, const Temperature& temperature, double t) {
    validate(model);
    if (temperature.is_zero()) return alpha1(model, t);
    if (t < 0.0) return std::conj(alpha2_nonneg(model, temperature.beta(), -t));
    return alpha2_nonneg(model, temperature.beta(), t);
}

ResponseKernel ResponseKernel::conjugated() const {
    ResponseKernel out = *this;
    for (auto& v : out.a1) v = std::conj(v);
    for (auto& v : out.a2) v = std::conj(v);
    return out;
}

ResponseKernel ResponseKernel::decimated() const {
    if (grid.n % 2 != 0) throw std::invalid_argument("ResponseKernel: cannot decimate odd grid");
    ResponseKernel out;
    out.grid = TimeGrid(grid.h * 2.0, grid.n / 2);
    out.temperature = temperature;
    out.a1.resize(out.grid.size());
    out.a2.resize(out.grid.size());
    for (int k = 0; k <= out.grid.n; ++k) {
        out.a1[k] = a1[2 * k];
        out.a2[k] = a2[2 * k];
    }
    return out;
}

ResponseKernel sample_kernels(const SpectralModel& model, const Temperature& temperature,
                              const TimeGrid& grid) {
    grid.validate();
    validate(model);
    ResponseKernel kernel;
    kernel.grid = grid;
    kernel.temperature = temperature;
    kernel.a1.resize(grid.size());
    kernel.a2.resize(grid.size());
    for (int k = 0; k <= grid.n; ++k) kernel.a1[k] = alpha1(model, grid.node(k));
    if (temperature.is_zero()) {
        kernel.a2 = kernel.a1;  // coth weight is the identity at zero temperature
    } else {
        for (int k = 0; k <= grid.n; ++k) kernel.a2[k] = alpha2(model, temperature, grid.node(k));
    }
    return kernel;
}

}  // namespace nmme

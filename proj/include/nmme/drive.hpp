// drive.hpp — external driving field epsilon(t)

#pragma once

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace nmme {

struct ConstantDrive {
    double amplitude{0.0};
};

// amplitude * cos(omega * t + phase)
struct SinusoidDrive {
    double amplitude{0.0};
    double omega{0.0};
    double phase{0.0};
};

// Linear interpolation between ascending (t, value) samples; evaluation
// outside the covered range is an error.
struct TabulatedDrive {
    std::vector<double> t;
    std::vector<double> value;
};

class Drive {
  public:
    Drive() : spec_(ConstantDrive{0.0}) {}
    Drive(ConstantDrive d) : spec_(d) {}
    Drive(SinusoidDrive d) : spec_(d) {}
    Drive(TabulatedDrive d) : spec_(std::move(d)) { validate_table(); }

    double operator()(double t) const {
        return std::visit(
            [t](const auto& d) -> double {
                using D = std::decay_t<decltype(d)>;
                if constexpr (std::is_same_v<D, ConstantDrive>) {
                    return d.amplitude;
                } else if constexpr (std::is_same_v<D, SinusoidDrive>) {
                    return d.amplitude * std::cos(d.omega * t + d.phase);
                } else {
                    if (t < d.t.front() || t > d.t.back())
                        throw std::invalid_argument("TabulatedDrive: time outside table range");
                    auto hi = std::upper_bound(d.t.begin(), d.t.end(), t);
                    std::size_t k = (hi == d.t.end()) ? d.t.size() - 1 : hi - d.t.begin();
                    if (k == 0) k = 1;
                    const double s = (t - d.t[k - 1]) / (d.t[k] - d.t[k - 1]);
                    return (1.0 - s) * d.value[k - 1] + s * d.value[k];
                }
            },
            spec_);
    }

  private:
    void validate_table() {
        const auto& d = std::get<TabulatedDrive>(spec_);
        if (d.t.size() < 2 || d.t.size() != d.value.size())
            throw std::invalid_argument("TabulatedDrive: need matching t/value samples (>= 2)");
        for (std::size_t k = 1; k < d.t.size(); ++k)
            if (!(d.t[k] > d.t[k - 1]))
                throw std::invalid_argument("TabulatedDrive: times must be strictly ascending");
    }

    std::variant<ConstantDrive, SinusoidDrive, TabulatedDrive> spec_;
};

}  // namespace nmme

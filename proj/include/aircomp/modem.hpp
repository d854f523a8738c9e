#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <utility>

namespace aircomp {

using ComplexSymbol = std::complex<double>;

// Square-QAM lattice for one slice: 2^b levels per I/Q branch, spacing chosen
// for unit mean symbol power, d = sqrt(6/(4^b - 1)).
struct PamGrid {
    int bits_per_branch;
    int levels;
    double spacing;

    explicit PamGrid(int b) : bits_per_branch(b) {
        if (b < 1 || b > 15) throw std::invalid_argument("PamGrid: bits per branch must be in [1,15]");
        levels = 1 << b;
        spacing = std::sqrt(6.0 / (std::pow(4.0, b) - 1.0));
    }
};

inline ComplexSymbol map_digital(std::uint64_t q_odd, std::uint64_t q_even, const PamGrid& grid) {
    const auto top = static_cast<std::uint64_t>(grid.levels - 1);
    if (q_odd > top || q_even > top) throw std::out_of_range("map_digital: level out of range");
    const double c = static_cast<double>(grid.levels - 1) / 2.0;
    return {(static_cast<double>(q_odd) - c) * grid.spacing,
            (static_cast<double>(q_even) - c) * grid.spacing};
}

// Inverse of the K-fold superposition: u = s/d + (2^b - 1)K/2, rounded and
// clipped to the aggregated range [0, (2^b - 1)K].
inline std::uint64_t demap_pam(double s, const PamGrid& grid, int devices) {
    const double shift = static_cast<double>(grid.levels - 1) * static_cast<double>(devices) / 2.0;
    const double u = std::round(s / grid.spacing + shift);
    const double top = static_cast<double>(grid.levels - 1) * static_cast<double>(devices);
    if (u < 0.0) return 0;
    if (u > top) return static_cast<std::uint64_t>(top);
    return static_cast<std::uint64_t>(u);
}

inline std::pair<std::uint64_t, std::uint64_t> demap_digital(ComplexSymbol s_hat, const PamGrid& grid,
                                                             int devices) {
    return {demap_pam(s_hat.real(), grid, devices), demap_pam(s_hat.imag(), grid, devices)};
}

// Analog mapping: center by the range midpoint tau/2 and scale to unit mean
// power under a uniform source, m = (x - tau/2) * sqrt(6)/delta per branch.
inline ComplexSymbol map_analog(double x_odd, double x_even, double x_min, double x_max) {
    if (!(x_max > x_min)) throw std::invalid_argument("map_analog: empty range");
    const double delta = x_max - x_min;
    const double mid = (x_max + x_min) / 2.0;
    const double g = std::sqrt(6.0) / delta;
    return {(x_odd - mid) * g, (x_even - mid) * g};
}

inline std::pair<double, double> demap_analog(ComplexSymbol r, double rho, int devices, double x_min,
                                              double x_max) {
    if (!(rho > 0.0)) throw std::invalid_argument("demap_analog: rho must be positive");
    if (!(x_max > x_min)) throw std::invalid_argument("demap_analog: empty range");
    const double delta = x_max - x_min;
    const double tau = x_max + x_min;
    const double g = delta / (rho * std::sqrt(6.0));
    const double shift = tau * static_cast<double>(devices) / 2.0;
    return {r.real() * g + shift, r.imag() * g + shift};
}

}  // namespace aircomp

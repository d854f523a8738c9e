#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "aircomp/modem.hpp"
#include "aircomp/rng.hpp"

namespace aircomp {

// K-user multi-access channel with chi-square block fading, channel-inversion
// power control, and AWGN. sigma_z^2 is the total complex noise variance;
// each branch carries sigma_z^2 / 2.
struct ChannelConfig {
    int devices = 10;
    double rho = 1.0;
    double noise_variance = 0.1;
    int fading_dof = 1;
    // Effective mode applies r = rho*sum + z directly (inversion cancels the
    // fading exactly); explicit mode draws gains and multiplies through.
    bool explicit_fading = false;
    int block_symbols = 256;
    double deep_fade_floor = 1e-6;

    void validate() const {
        if (devices < 1) throw std::invalid_argument("ChannelConfig: devices must be >= 1");
        if (!(rho > 0.0)) throw std::invalid_argument("ChannelConfig: rho must be positive");
        if (noise_variance < 0.0) throw std::invalid_argument("ChannelConfig: negative noise variance");
        if (fading_dof < 1) throw std::invalid_argument("ChannelConfig: fading dof must be >= 1");
        if (block_symbols < 1) throw std::invalid_argument("ChannelConfig: block length must be >= 1");
    }

    double snr() const {
        if (noise_variance <= 0.0) throw std::domain_error("ChannelConfig: SNR undefined at zero noise");
        return rho * rho / noise_variance;
    }
};

struct ChannelDiagnostics {
    std::uint64_t fading_draws = 0;
    std::uint64_t deep_fades = 0;
    double sum_tx_power = 0.0;  // sum over draws of |w|^2 = rho^2/|h|^2

    double mean_tx_power() const {
        return fading_draws ? sum_tx_power / static_cast<double>(fading_draws) : 0.0;
    }
};

// |h|^2 ~ chi-square(dof), phase uniform.
inline std::complex<double> draw_fading_gain(Rng& rng, int dof) {
    double power = 0.0;
    for (int i = 0; i < dof; ++i) {
        const double g = rng.normal();
        power += g * g;
    }
    const double phase = rng.uniform() * 2.0 * 3.14159265358979323846;
    const double mag = std::sqrt(power);
    return {mag * std::cos(phase), mag * std::sin(phase)};
}

inline std::vector<std::complex<double>> draw_fading(const ChannelConfig& cfg, Rng& rng) {
    cfg.validate();
    std::vector<std::complex<double>> h(static_cast<std::size_t>(cfg.devices));
    for (auto& v : h) v = draw_fading_gain(rng, cfg.fading_dof);
    return h;
}

// Precoder w = rho / h, so h*w = rho exactly.
inline std::complex<double> invert(std::complex<double> h, double rho) {
    if (std::norm(h) == 0.0) throw std::domain_error("invert: zero channel gain");
    return rho / h;
}

inline std::complex<double> awgn_sample(Rng& rng, double noise_variance) {
    return noise_variance > 0.0 ? rng.complex_normal(noise_variance) : std::complex<double>{0.0, 0.0};
}

// r_t = rho * sum_k m_{k,t} + z_t. Fading and noise use separate streams so
// the effective and explicit modes see identical noise for the same seed.
inline std::vector<ComplexSymbol> transmit(const std::vector<std::vector<ComplexSymbol>>& symbols,
                                           const ChannelConfig& cfg, Rng& noise_rng, Rng& fading_rng,
                                           ChannelDiagnostics* diag = nullptr) {
    cfg.validate();
    if (static_cast<int>(symbols.size()) != cfg.devices)
        throw std::invalid_argument("transmit: need one symbol sequence per device");
    const std::size_t n = symbols.empty() ? 0 : symbols.front().size();
    for (const auto& s : symbols)
        if (s.size() != n) throw std::invalid_argument("transmit: sequence length mismatch");

    std::vector<ComplexSymbol> r(n);
    std::vector<std::complex<double>> gain(static_cast<std::size_t>(cfg.devices),
                                           std::complex<double>{cfg.rho, 0.0});
    for (std::size_t t = 0; t < n; ++t) {
        if (cfg.explicit_fading && t % static_cast<std::size_t>(cfg.block_symbols) == 0) {
            for (auto& g : gain) {
                const auto h = draw_fading_gain(fading_rng, cfg.fading_dof);
                const auto w = invert(h, cfg.rho);
                if (diag) {
                    ++diag->fading_draws;
                    diag->sum_tx_power += std::norm(w);
                    if (std::norm(h) < cfg.deep_fade_floor) ++diag->deep_fades;
                }
                g = h * w;
            }
        }
        ComplexSymbol sum{0.0, 0.0};
        for (std::size_t k = 0; k < symbols.size(); ++k) sum += gain[k] * symbols[k][t];
        r[t] = sum + awgn_sample(noise_rng, cfg.noise_variance);
    }
    return r;
}

}  // namespace aircomp
